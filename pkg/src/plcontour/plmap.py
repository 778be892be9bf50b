"""
Piecewise-Linear Maps
=====================

Exact representation and algebra of piecewise-linear maps on closed
rational intervals. Every coordinate is a ``fractions.Fraction``; floats are
rejected at construction so that equalities such as ``f == compose(t, s)``
are decidable.
"""

from bisect import bisect_left, bisect_right
from enum import Enum
from fractions import Fraction
from itertools import pairwise
from operator import itemgetter
from typing import Iterable, Iterator, Optional, Sequence, Union

from .utils.exceptions import CompositionError, DomainError, FormatError
from .utils.logger import get_logger

logger = get_logger(__name__)

Scalar = Union[int, Fraction, str]
Point = tuple[Fraction, Fraction]


def as_fraction(value: Scalar) -> Fraction:
    """
    Coerce an exact scalar to a Fraction.

    Args:
        value: int, Fraction or rational string such as ``"-3/8"``

    Returns:
        The value as a reduced Fraction

    Raises:
        FormatError: If a string does not parse or has a zero denominator
        DomainError: If the value is a float or another inexact type
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError("Booleans are not scalars", details={"value": value})
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError:
            raise FormatError(
                f"Zero denominator in {value!r}", details={"value": value}
            ) from None
        except ValueError:
            raise FormatError(
                f"Not a rational number: {value!r}", details={"value": value}
            ) from None
    raise DomainError(
        f"Unsupported scalar type {type(value).__name__}; only exact rationals are allowed",
        details={"value": repr(value)},
    )


def format_scalar(value: Fraction) -> str:
    """Render a Fraction as ``p/q`` (or ``p`` for integers)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Orientation(str, Enum):
    """Orientation of a departure or a radial departure."""

    POSITIVE = "positive"
    NEGATIVE = "negative"

    def __str__(self) -> str:
        return self.value

    def flip(self) -> "Orientation":
        return Orientation.NEGATIVE if self is Orientation.POSITIVE else Orientation.POSITIVE

    @classmethod
    def of(cls, value: Fraction) -> "Orientation":
        """Orientation of a nonzero value."""
        if value == 0:
            raise DomainError("Zero has no orientation")
        return cls.POSITIVE if value > 0 else cls.NEGATIVE

    def __str__(self) -> str:
        return self.value


class Side(str, Enum):
    """Side of 0 in the domain [-1, 1]."""

    LEFT = "left"
    RIGHT = "right"

    def __str__(self) -> str:
        return self.value


def _collinear(p: Point, q: Point, r: Point) -> bool:
    return (q[1] - p[1]) * (r[0] - q[0]) == (r[1] - q[1]) * (q[0] - p[0])


def _canonical_points(points: Sequence[Point]) -> tuple[Point, ...]:
    out: list[Point] = [points[0]]
    for point in points[1:]:
        while len(out) >= 2 and _collinear(out[-2], out[-1], point):
            out.pop()
        out.append(point)
    return tuple(out)


class PLMap:
    """
    A piecewise-linear map given by breakpoints with strictly increasing x.

    The domain is ``[first x, last x]``. The codomain is a declared interval
    that must contain every breakpoint value; it is metadata and takes no
    part in equality, which compares canonical (collinear-free) breakpoints.
    """

    __slots__ = ("_xs", "_ys", "_codomain", "_canonical")

    def __init__(
        self,
        points: Iterable[tuple[Scalar, Scalar]],
        codomain: tuple[Scalar, Scalar] = (-1, 1),
    ):
        pts = [(as_fraction(x), as_fraction(y)) for x, y in points]
        if len(pts) < 2:
            raise DomainError(
                "A PL map needs at least two breakpoints",
                details={"count": len(pts)},
            )
        for (x0, _), (x1, _) in pairwise(pts):
            if x1 <= x0:
                raise FormatError(
                    "Breakpoint x-coordinates must be strictly increasing",
                    details={"previous": format_scalar(x0), "x": format_scalar(x1)},
                )
        lo, hi = as_fraction(codomain[0]), as_fraction(codomain[1])
        if lo > hi:
            raise DomainError("Empty codomain", details={"codomain": [str(lo), str(hi)]})
        for x, y in pts:
            if not lo <= y <= hi:
                raise DomainError(
                    "Breakpoint value outside the declared codomain",
                    details={
                        "x": format_scalar(x),
                        "y": format_scalar(y),
                        "codomain": [format_scalar(lo), format_scalar(hi)],
                    },
                )
        self._xs = tuple(x for x, _ in pts)
        self._ys = tuple(y for _, y in pts)
        self._codomain = (lo, hi)
        self._canonical: Optional[tuple[Point, ...]] = None

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return self._xs

    @property
    def ys(self) -> tuple[Fraction, ...]:
        return self._ys

    @property
    def points(self) -> tuple[Point, ...]:
        return tuple(zip(self._xs, self._ys))

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self._xs[0], self._xs[-1]

    @property
    def codomain(self) -> tuple[Fraction, Fraction]:
        return self._codomain

    @property
    def canonical_points(self) -> tuple[Point, ...]:
        if self._canonical is None:
            self._canonical = _canonical_points(self.points)
        return self._canonical

    def pieces(self) -> Iterator[tuple[Point, Point]]:
        """Iterate over consecutive breakpoint pairs (linear pieces)."""
        return pairwise(self.points)

    def __call__(self, x: Scalar) -> Fraction:
        return evaluate(self, x)

    def __len__(self) -> int:
        return len(self._xs)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.canonical_points == other.canonical_points

    def __hash__(self) -> int:
        return hash(self.canonical_points)

    def __repr__(self) -> str:
        body = ", ".join(
            f"({format_scalar(x)}, {format_scalar(y)})" for x, y in self.points
        )
        return f"{type(self).__name__}([{body}])"


class PointedPLMap(PLMap):
    """
    A PL map [-1,1] -> [-1,1] fixing 0.

    Side flags record whether the restrictions to [-1,0] and [0,1] are
    non-constant.
    """

    __slots__ = ("left_nonconstant", "right_nonconstant")

    def __init__(
        self,
        points: Iterable[tuple[Scalar, Scalar]],
        codomain: tuple[Scalar, Scalar] = (-1, 1),
    ):
        super().__init__(points, codomain)
        if self.domain != (Fraction(-1), Fraction(1)):
            raise DomainError(
                "Pointed maps have domain [-1, 1]",
                details={"domain": [format_scalar(v) for v in self.domain]},
            )
        lo, hi = self.codomain
        if lo < -1 or hi > 1:
            raise DomainError("Pointed maps take values in [-1, 1]")
        if evaluate(self, 0) != 0:
            raise DomainError(
                "Pointed maps satisfy f(0) = 0",
                details={"f(0)": format_scalar(evaluate(self, 0))},
            )
        left_lo, left_hi = image(self, -1, 0)
        right_lo, right_hi = image(self, 0, 1)
        self.left_nonconstant = left_lo != left_hi
        self.right_nonconstant = right_lo != right_hi

    @classmethod
    def from_map(cls, f: PLMap) -> "PointedPLMap":
        """Validate an arbitrary PL map as pointed."""
        if isinstance(f, PointedPLMap):
            return f
        return cls(f.points, f.codomain)

    def is_nonconstant(self, side: Side) -> bool:
        return self.left_nonconstant if side is Side.LEFT else self.right_nonconstant


def _strictly_inside(xs: Sequence[Fraction], a: Fraction, b: Fraction) -> slice:
    """Slice of the sorted xs lying in the open interval (a, b)."""
    return slice(bisect_right(xs, a), bisect_left(xs, b))


def evaluate(f: PLMap, x: Scalar) -> Fraction:
    """
    Evaluate f at x by exact linear interpolation.

    Raises:
        DomainError: If x lies outside the domain of f
    """
    x = as_fraction(x)
    xs, ys = f.xs, f.ys
    if x < xs[0] or x > xs[-1]:
        raise DomainError(
            "Point outside the domain",
            details={
                "x": format_scalar(x),
                "domain": [format_scalar(xs[0]), format_scalar(xs[-1])],
            },
        )
    i = bisect_left(xs, x)
    if xs[i] == x:
        return ys[i]
    x0, x1, y0, y1 = xs[i - 1], xs[i], ys[i - 1], ys[i]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def canonicalize(f: PLMap) -> PLMap:
    """Remove interior breakpoints collinear with their neighbours."""
    canonical = f.canonical_points
    if len(canonical) == len(f):
        return f
    return _rebuild(f, canonical)


def _rebuild(f: PLMap, points: Iterable[Point], codomain=None) -> PLMap:
    """Build a map of the same class as f (pointed maps stay pointed when possible)."""
    codomain = codomain or f.codomain
    if isinstance(f, PointedPLMap):
        points = list(points)
        if points[0][0] == -1 and points[-1][0] == 1:
            return PointedPLMap(points, codomain)
    return PLMap(points, codomain)


def compose(f: PLMap, g: PLMap) -> PLMap:
    """
    Compose two PL maps, returning ``f∘g``.

    The partition is the breakpoints of g together with the g-preimages of
    the breakpoints of f on non-constant pieces of g.

    Raises:
        CompositionError: If the image of g is not inside the domain of f
    """
    a, b = f.domain
    lo, hi = image(g, *g.domain)
    if lo < a or hi > b:
        raise CompositionError(
            details={
                "image": [format_scalar(lo), format_scalar(hi)],
                "domain": [format_scalar(a), format_scalar(b)],
            }
        )
    xs = set(g.xs)
    for (x0, y0), (x1, y1) in g.pieces():
        if y0 == y1:
            continue
        for c in f.xs[_strictly_inside(f.xs, min(y0, y1), max(y0, y1))]:
            xs.add(x0 + (c - y0) * (x1 - x0) / (y1 - y0))
    points = [(x, evaluate(f, evaluate(g, x))) for x in sorted(xs)]
    result = PLMap(_canonical_points(points), codomain=f.codomain)
    if isinstance(g, PointedPLMap) and isinstance(f, PointedPLMap):
        return PointedPLMap(result.points, f.codomain)
    return result


def reflect(f: PLMap) -> PLMap:
    """Return ``f∘r`` with ``r(x) = -x``: the domain is negated and reversed."""
    return _rebuild(f, [(-x, y) for x, y in reversed(f.points)])


def negate(f: PLMap) -> PLMap:
    """Return ``-f``."""
    lo, hi = f.codomain
    return _rebuild(f, [(x, -y) for x, y in f.points], codomain=(-hi, -lo))


def restrict(f: PLMap, a: Scalar, b: Scalar) -> PLMap:
    """
    Restrict f to [a, b].

    Raises:
        DomainError: If a >= b or [a, b] is not inside the domain
    """
    a, b = as_fraction(a), as_fraction(b)
    lo, hi = f.domain
    if not (lo <= a < b <= hi):
        raise DomainError(
            "Restriction interval must satisfy a < b inside the domain",
            details={"a": format_scalar(a), "b": format_scalar(b)},
        )
    inside = _strictly_inside(f.xs, a, b)
    inner = list(zip(f.xs[inside], f.ys[inside]))
    return PLMap([(a, evaluate(f, a)), *inner, (b, evaluate(f, b))], f.codomain)


def image(f: PLMap, a: Scalar, b: Scalar) -> tuple[Fraction, Fraction]:
    """
    Exact minimum and maximum of f over [a, b].

    Raises:
        DomainError: If a > b or [a, b] is not inside the domain
    """
    a, b = as_fraction(a), as_fraction(b)
    lo, hi = f.domain
    if not (lo <= a <= b <= hi):
        raise DomainError(
            "Image interval must satisfy a <= b inside the domain",
            details={"a": format_scalar(a), "b": format_scalar(b)},
        )
    values = [evaluate(f, a), evaluate(f, b)]
    values.extend(f.ys[_strictly_inside(f.xs, a, b)])
    return min(values), max(values)


def preimages(f: PLMap, value: Scalar) -> list[Fraction]:
    """
    Points x with f(x) = value.

    Constant pieces at the given value contribute their endpoints only.
    """
    value = as_fraction(value)
    found: set[Fraction] = {x for x, y in f.points if y == value}
    for (x0, y0), (x1, y1) in f.pieces():
        if min(y0, y1) < value < max(y0, y1):
            found.add(x0 + (value - y0) * (x1 - x0) / (y1 - y0))
    return sorted(found)


def first_hit(f: PLMap, value: Scalar, start: Scalar, end: Scalar) -> Optional[Fraction]:
    """
    First point moving from ``start`` towards ``end`` where f equals value.

    Returns:
        The point, or None if f never takes the value between start and end
    """
    value, start, end = as_fraction(value), as_fraction(start), as_fraction(end)
    if evaluate(f, start) == value:
        return start
    if start == end:
        return None
    lo, hi = min(start, end), max(start, end)
    xs = [lo, *f.xs[_strictly_inside(f.xs, lo, hi)], hi]
    if start > end:
        xs.reverse()
    for p, q in pairwise(xs):
        yp, yq = evaluate(f, p), evaluate(f, q)
        if min(yp, yq) < value < max(yp, yq):
            return p + (value - yp) * (q - p) / (yq - yp)
        if yq == value:
            return q
    return None


def inverse(f: PLMap) -> PLMap:
    """
    Inverse of a strictly monotone PL map.

    Raises:
        DomainError: If f is not strictly monotone
    """
    ys = f.ys
    increasing = all(y0 < y1 for y0, y1 in pairwise(ys))
    decreasing = all(y0 > y1 for y0, y1 in pairwise(ys))
    if not (increasing or decreasing):
        raise DomainError("Only strictly monotone maps are invertible")
    points = [(y, x) for x, y in f.points]
    if decreasing:
        points.reverse()
    return PLMap(points, codomain=f.domain)


def paste(pieces: Sequence[PLMap]) -> PLMap:
    """
    Join maps on abutting intervals into one map.

    Raises:
        DomainError: If consecutive domains do not abut or values disagree
    """
    if not pieces:
        raise DomainError("Nothing to paste")
    points: list[Point] = list(pieces[0].points)
    lo = min(p.codomain[0] for p in pieces)
    hi = max(p.codomain[1] for p in pieces)
    for piece in pieces[1:]:
        x, y = piece.points[0]
        if x != points[-1][0]:
            raise DomainError(
                "Pasted pieces must abut",
                details={"end": format_scalar(points[-1][0]), "start": format_scalar(x)},
            )
        if y != points[-1][1]:
            raise DomainError(
                "Pasted pieces disagree at the junction",
                details={
                    "x": format_scalar(x),
                    "left": format_scalar(points[-1][1]),
                    "right": format_scalar(y),
                },
            )
        points.extend(piece.points[1:])
    return PLMap(_canonical_points(points), codomain=(lo, hi))


def common_partition(*maps: PLMap) -> list[Fraction]:
    """Sorted union of the breakpoints of all maps."""
    return sorted({x for f in maps for x in f.xs})


def crossings(f: PLMap, g: PLMap, a: Scalar, b: Scalar) -> list[Fraction]:
    """
    Refined partition of [a, b] on which f - g is linear and sign-constant.

    Contains a, b, every breakpoint of f and g inside, and every point where
    f - g changes sign.
    """
    a, b = as_fraction(a), as_fraction(b)
    xs = [a, *(x for x in common_partition(f, g) if a < x < b), b]
    out = set(xs)
    for p, q in pairwise(xs):
        dp = evaluate(f, p) - evaluate(g, p)
        dq = evaluate(f, q) - evaluate(g, q)
        if dp * dq < 0:
            out.add(p + dp * (q - p) / (dp - dq))
    return sorted(out)


def is_constant_on(f: PLMap, a: Scalar, b: Scalar) -> bool:
    lo, hi = image(f, a, b)
    return lo == hi


def is_linear_on(f: PLMap, a: Scalar, b: Scalar) -> bool:
    """True iff f has no kink strictly inside (a, b)."""
    a, b = as_fraction(a), as_fraction(b)
    canonical = f.canonical_points
    first = itemgetter(0)
    return bisect_right(canonical, a, key=first) >= bisect_left(canonical, b, key=first)
