"""
Text Formats
============

Readers and writers for the exact text formats:

- map: ``plmap`` header, optional ``codomain <lo> <hi>``, one ``<x> <y>``
  line per breakpoint
- system: ``system N`` followed by N map blocks
- simplicial: a system followed by ``S <n>: x1 x2 …`` lines
- provenance sidecar: ``provenance`` then ``<start> <end> <tag>`` lines
- contour report: ``<side> <index> <x> <value> <orientation>`` lines

Lines starting with ``#`` and blank lines are ignored everywhere.
"""

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Union

from .bridging import ProvenanceInterval
from .contour import contour_points
from .plmap import PLMap, as_fraction, format_scalar
from .simplicial import SimplicialSystem
from .systems import SystemPrefix
from .utils.exceptions import FormatError, ParseError
from .utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_CODOMAIN = (Fraction(-1), Fraction(1))

Document = Union[PLMap, SystemPrefix, SimplicialSystem]


@dataclass
class _Line:
    number: int
    tokens: list[str]


class _Cursor:
    """Significant lines of a document with their 1-based line numbers."""

    def __init__(self, text: str, path: Optional[str] = None):
        self.path = path
        self.lines = [
            _Line(number, raw.split())
            for number, raw in enumerate(text.splitlines(), start=1)
            if raw.strip() and not raw.lstrip().startswith("#")
        ]
        self.position = 0

    def peek(self) -> Optional[_Line]:
        if self.position < len(self.lines):
            return self.lines[self.position]
        return None

    def next(self, expected: str) -> _Line:
        line = self.peek()
        if line is None:
            last = self.lines[-1].number if self.lines else 0
            raise ParseError(f"Unexpected end of input, expected {expected}", line=last, path=self.path)
        self.position += 1
        return line

    def error(self, message: str, line: _Line) -> ParseError:
        return ParseError(message, line=line.number, path=self.path)

    def scalar(self, token: str, line: _Line) -> Fraction:
        try:
            return as_fraction(token)
        except FormatError as exc:
            exc.details.update({"line": line.number, "path": self.path})
            raise


def _read_map(cursor: _Cursor) -> PLMap:
    header = cursor.next("'plmap'")
    if header.tokens != ["plmap"]:
        raise cursor.error("Expected 'plmap' header", header)
    codomain = DEFAULT_CODOMAIN
    line = cursor.peek()
    if line is not None and line.tokens[0] == "codomain":
        cursor.next("codomain")
        if len(line.tokens) != 3:
            raise cursor.error("Expected 'codomain <lo> <hi>'", line)
        codomain = (cursor.scalar(line.tokens[1], line), cursor.scalar(line.tokens[2], line))
    points = []
    while (line := cursor.peek()) is not None and line.tokens[0] not in ("plmap", "S"):
        cursor.next("breakpoint")
        if len(line.tokens) != 2:
            raise cursor.error("Expected a breakpoint '<x> <y>'", line)
        points.append((cursor.scalar(line.tokens[0], line), cursor.scalar(line.tokens[1], line)))
    try:
        return PLMap(points, codomain=codomain)
    except FormatError as exc:
        exc.details.update({"line": header.number, "path": cursor.path})
        raise


def parse_map(text: str, path: Optional[str] = None) -> PLMap:
    """
    Parse the map text format.

    Raises:
        ParseError: On a malformed line, naming its number
        FormatError: On ``1/0`` or non-increasing x
    """
    cursor = _Cursor(text, path)
    f = _read_map(cursor)
    trailing = cursor.peek()
    if trailing is not None:
        raise cursor.error("Unexpected content after the map", trailing)
    return f


def format_map(f: PLMap) -> str:
    lines = ["plmap"]
    if f.codomain != DEFAULT_CODOMAIN:
        lo, hi = f.codomain
        lines.append(f"codomain {format_scalar(lo)} {format_scalar(hi)}")
    lines.extend(f"{format_scalar(x)} {format_scalar(y)}" for x, y in f.points)
    return "\n".join(lines) + "\n"


def _read_sets(cursor: _Cursor, levels: int) -> list[list[Fraction]]:
    sets: dict[int, list[Fraction]] = {}
    while (line := cursor.peek()) is not None:
        cursor.next("set line")
        if len(line.tokens) < 2 or line.tokens[0] != "S" or not line.tokens[1].endswith(":"):
            raise cursor.error("Expected 'S <n>: x1 x2 ...'", line)
        try:
            n = int(line.tokens[1][:-1])
        except ValueError:
            raise cursor.error("Set index must be an integer", line) from None
        if not 1 <= n <= levels or n in sets:
            raise cursor.error(f"Set index {n} out of range or repeated", line)
        sets[n] = [cursor.scalar(token, line) for token in line.tokens[2:]]
    if len(sets) != levels:
        missing = [n for n in range(1, levels + 1) if n not in sets]
        raise ParseError(
            "Missing set lines",
            line=cursor.lines[-1].number if cursor.lines else 0,
            path=cursor.path,
            details={"missing": missing},
        )
    return [sets[n] for n in range(1, levels + 1)]


def parse_document(text: str, path: Optional[str] = None) -> Document:
    """
    Parse any of the map, system or simplicial formats, chosen by header.

    Raises:
        ParseError: On a malformed line, naming its number
        FormatError: On semantic violations inside a map block
    """
    cursor = _Cursor(text, path)
    header = cursor.peek()
    if header is None:
        raise ParseError("Empty document", line=0, path=path)
    if header.tokens[0] == "plmap":
        return parse_map(text, path)
    if header.tokens[0] != "system" or len(header.tokens) != 2:
        raise cursor.error("Expected 'plmap' or 'system N' header", header)
    cursor.next("system header")
    try:
        count = int(header.tokens[1])
    except ValueError:
        raise cursor.error("System size must be an integer", header) from None
    if count < 1:
        raise cursor.error("System size must be positive", header)
    maps = [_read_map(cursor) for _ in range(count)]
    prefix = SystemPrefix(tuple(maps))
    if cursor.peek() is None:
        return prefix
    sets = _read_sets(cursor, count + 1)
    return SimplicialSystem(prefix, tuple(tuple(s) for s in sets))


def format_system(p: SystemPrefix) -> str:
    return f"system {len(p)}\n" + "".join(format_map(f) for f in p)


def format_simplicial(system: SimplicialSystem) -> str:
    lines = [
        f"S {n}: " + " ".join(format_scalar(x) for x in s)
        for n, s in enumerate(system.sets, start=1)
    ]
    return format_system(system.prefix) + "\n".join(lines) + "\n"


def format_document(document: Document) -> str:
    if isinstance(document, SimplicialSystem):
        return format_simplicial(document)
    if isinstance(document, SystemPrefix):
        return format_system(document)
    return format_map(document)


def format_provenance(intervals: Iterable[ProvenanceInterval]) -> str:
    return "provenance\n" + "".join(f"{interval}\n" for interval in intervals)


def parse_provenance(text: str, path: Optional[str] = None) -> list[ProvenanceInterval]:
    cursor = _Cursor(text, path)
    header = cursor.next("'provenance'")
    if header.tokens != ["provenance"]:
        raise cursor.error("Expected 'provenance' header", header)
    intervals = []
    while (line := cursor.peek()) is not None:
        cursor.next("interval")
        if len(line.tokens) != 3:
            raise cursor.error("Expected '<start> <end> <tag>'", line)
        start, end = cursor.scalar(line.tokens[0], line), cursor.scalar(line.tokens[1], line)
        intervals.append(ProvenanceInterval(start, end, line.tokens[2]))
    return intervals


def format_contour_report(f: PLMap) -> str:
    """One line per contour point, right side first, ordered from 0 outward."""
    data = contour_points(f)
    lines = [
        f"{record.side} {index} {format_scalar(record.point)} "
        f"{format_scalar(record.value)} {record.orientation}"
        for records in (data.right, data.left)
        for index, record in enumerate(records, start=1)
    ]
    return "\n".join(lines) + "\n"


def read_document(path: Union[str, Path]) -> Document:
    """Parse a map, system or simplicial file."""
    path = Path(path)
    document = parse_document(path.read_text(encoding="utf-8"), str(path))
    logger.debug("document read", path=str(path), kind=type(document).__name__)
    return document


def write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.debug("file written", path=str(path))
    return path
