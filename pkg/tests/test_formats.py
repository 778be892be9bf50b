"""
Text Format Tests
=================

Parsing and writing of map, system, simplicial and provenance files.
"""

from fractions import Fraction

import pytest

from plcontour.bridging import ProvenanceInterval
from plcontour.formats import (
    format_contour_report,
    format_document,
    format_map,
    format_provenance,
    parse_document,
    parse_map,
    parse_provenance,
    read_document,
    write_text,
)
from plcontour.simplicial import SimplicialSystem, check_simplicial
from plcontour.systems import SystemPrefix
from plcontour.utils.exceptions import FormatError, ParseError


def _significant(text: str) -> str:
    lines = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
    return "\n".join(lines) + "\n"


class TestMaps:
    def test_bundled_w(self, data_dir, w_map):
        assert read_document(data_dir / "W.plmap") == w_map

    def test_comments_and_blank_lines(self, identity):
        assert parse_map("# identity\nplmap\n\n-1 -1\n1 1\n") == identity

    def test_codomain_line(self):
        f = parse_map("plmap\ncodomain 0 1\n0 0\n1 1\n")
        assert f.codomain == (Fraction(0), Fraction(1))
        assert format_map(f).splitlines()[1] == "codomain 0 1"

    def test_default_codomain_is_omitted(self, w_map):
        assert format_map(w_map) == "plmap\n-1 -1\n0 0\n1/2 1\n1 -1/2\n"

    def test_zero_denominator(self):
        with pytest.raises(FormatError) as exc_info:
            parse_map("plmap\n0 0\n1/0 1\n")
        assert exc_info.value.details["line"] == 3

    def test_malformed_line(self):
        with pytest.raises(ParseError) as exc_info:
            parse_map("plmap\n0 0\n1 2 3\n", path="bad.plmap")
        assert exc_info.value.details == {"line": 3, "path": "bad.plmap"}

    def test_non_increasing_x(self):
        with pytest.raises(FormatError):
            parse_map("plmap\n0 0\n0 1\n")

    def test_missing_header(self):
        with pytest.raises(ParseError) as exc_info:
            parse_map("0 0\n1 1\n")
        assert exc_info.value.details["line"] == 1

    def test_trailing_content(self):
        with pytest.raises(ParseError):
            parse_map("plmap\n-1 -1\n1 1\nplmap\n")


class TestSystems:
    def test_example_system(self, data_dir, ex4):
        document = read_document(data_dir / "ex4.system")
        assert isinstance(document, SystemPrefix)
        assert document.maps == ex4

    @pytest.mark.parametrize("name", ["ex4.system", "w5.system", "tent3.system"])
    def test_writer_reproduces_files(self, data_dir, name):
        text = (data_dir / name).read_text(encoding="utf-8")
        assert format_document(parse_document(text)) == _significant(text)

    def test_simplicial_file(self, data_dir):
        system = read_document(data_dir / "tent3.system")
        assert isinstance(system, SimplicialSystem)
        assert len(system.level_set(4)) == 17
        assert check_simplicial(system).passed

    def test_missing_set_lines(self):
        text = "system 1\nplmap\n-1 -1\n1 1\nS 1: -1 1\n"
        with pytest.raises(ParseError) as exc_info:
            parse_document(text)
        assert exc_info.value.details["missing"] == [2]

    def test_bad_system_size(self):
        with pytest.raises(ParseError):
            parse_document("system two\nplmap\n-1 -1\n1 1\n")

    def test_empty_document(self):
        with pytest.raises(ParseError):
            parse_document("# nothing here\n")


class TestSidecars:
    def test_contour_report(self, m_map):
        assert format_contour_report(m_map) == (
            "right 1 1/2 1 positive\n"
            "right 2 1 -1/2 negative\n"
            "left 1 -1 -1 negative\n"
        )

    def test_provenance(self):
        intervals = [
            ProvenanceInterval(Fraction(-1), Fraction(0), "original"),
            ProvenanceInterval(Fraction(0), Fraction(1, 2), "bridged-I(1)"),
        ]
        text = format_provenance(intervals)
        assert text == "provenance\n-1 0 original\n0 1/2 bridged-I(1)\n"
        assert parse_provenance(text) == intervals

    def test_write_creates_directories(self, tmp_path, w_map):
        path = write_text(tmp_path / "out" / "w.plmap", format_map(w_map))
        assert read_document(path) == w_map
