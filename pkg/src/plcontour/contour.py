"""
Contour Factorization
=====================

Departures, contour points, (radial) contour factors, meandering lifts, the
reach function L, liftable ranges and decision procedures for radial
departures of pointed PL maps.

Departure sets are kept as maximal segments along linear pieces. A right
segment is the half-open interval ``(inner, outer]``; a left segment is
``[outer, inner)``. The inner end is the one closer to 0.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import pairwise
from typing import Callable, Iterator, Optional, Sequence

from .plmap import (
    Orientation,
    PLMap,
    PointedPLMap,
    Scalar,
    Side,
    as_fraction,
    canonicalize,
    compose,
    evaluate,
    first_hit,
    format_scalar,
    image,
    negate,
    preimages,
    reflect,
    restrict,
)
from .utils.exceptions import (
    DegenerateSideError,
    DomainError,
    HypothesisError,
    InvariantViolationError,
    NotLiftableError,
)
from .utils.logger import get_logger

logger = get_logger(__name__)

ZERO = Fraction(0)

Pick = Callable[[Sequence[Fraction]], Fraction]


@dataclass(frozen=True)
class DepartureSegment:
    """A maximal run of departures of one orientation."""

    inner: Fraction
    outer: Fraction
    orientation: Orientation
    side: Side

    def contains(self, x: Fraction) -> bool:
        if self.side is Side.RIGHT:
            return self.inner < x <= self.outer
        return self.outer <= x < self.inner


@dataclass(frozen=True)
class DepartureRecord:
    """A single departure (used for contour points)."""

    point: Fraction
    value: Fraction
    orientation: Orientation
    side: Side


@dataclass(frozen=True)
class ContourData:
    """
    Right contour points α₁ < … < αₙ and left contour points β₁ > … > βₘ.

    Index 0 is the sentinel α₀ = β₀ = 0 with value 0.
    """

    right: tuple[DepartureRecord, ...]
    left: tuple[DepartureRecord, ...]

    def alpha(self, i: int) -> Fraction:
        return ZERO if i == 0 else self.right[i - 1].point

    def beta(self, j: int) -> Fraction:
        return ZERO if j == 0 else self.left[j - 1].point

    def records(self, side: Side) -> tuple[DepartureRecord, ...]:
        return self.right if side is Side.RIGHT else self.left

    def point(self, side: Side, index: int) -> Fraction:
        return self.alpha(index) if side is Side.RIGHT else self.beta(index)


@dataclass(frozen=True)
class RadialDepartureWitness:
    """A pair ⟨x1, x2⟩ with x1 < 0 < x2 witnessing a radial departure."""

    x1: Fraction
    x2: Fraction
    orientation: Orientation

    def nests_strictly(self, other: "RadialDepartureWitness") -> bool:
        """True iff one pair lies strictly inside the other."""
        return (self.x1 < other.x1 < 0 < other.x2 < self.x2) or (
            other.x1 < self.x1 < 0 < self.x2 < other.x2
        )

    def __str__(self) -> str:
        return f"<{format_scalar(self.x1)}, {format_scalar(self.x2)}> {self.orientation}"


def _require_pointed(f: PLMap) -> None:
    a, b = f.domain
    if not (a < 0 < b) or evaluate(f, 0) != 0:
        raise DomainError("Expected a map with 0 inside its domain and f(0) = 0")


def side_view(f: PLMap, side: Side) -> PLMap:
    """The one-sided map on [0, e]: f on the right, f∘r on the left."""
    a, b = f.domain
    if side is Side.RIGHT:
        return restrict(f, 0, b)
    return reflect(restrict(f, a, 0))


def _record_segments(g: PLMap) -> list[tuple[Fraction, Fraction, Orientation]]:
    """Departure segments of a one-sided map g on [0, e] with g(0) = 0."""
    hi = lo = ZERO
    segments: list[tuple[Fraction, Fraction, Orientation]] = []
    for (x0, y0), (x1, y1) in g.pieces():
        if y1 > hi:
            start = x0 + (hi - y0) * (x1 - x0) / (y1 - y0)
            orientation = Orientation.POSITIVE
            hi = y1
        elif y1 < lo:
            start = x0 + (lo - y0) * (x1 - x0) / (y1 - y0)
            orientation = Orientation.NEGATIVE
            lo = y1
        else:
            continue
        if segments and segments[-1][2] is orientation and segments[-1][1] == start:
            segments[-1] = (segments[-1][0], x1, orientation)
        else:
            segments.append((start, x1, orientation))
    return segments


def departure_segments(f: PLMap, side: Side) -> list[DepartureSegment]:
    """Departure segments on one side; empty when that side is constant."""
    sign = 1 if side is Side.RIGHT else -1
    return [
        DepartureSegment(sign * inner, sign * outer, orientation, side)
        for inner, outer, orientation in _record_segments(side_view(f, side))
    ]


def _check_side(f: PLMap, side: Side) -> None:
    a, b = f.domain
    lo, hi = image(f, 0, b) if side is Side.RIGHT else image(f, a, 0)
    if lo == hi:
        raise DegenerateSideError(
            f"Map is constant on the {side} side", side=side.value
        )


def departures(f: PLMap, side: Side) -> list[DepartureSegment]:
    """
    Exact departure set of f on one side, as maximal segments.

    Args:
        f: Pointed PL map
        side: Which side of 0

    Returns:
        Segments ordered from 0 outward

    Raises:
        DegenerateSideError: If f is constant on that side
    """
    _require_pointed(f)
    _check_side(f, side)
    return departure_segments(f, side)


def departure_orientation(f: PLMap, x: Scalar) -> Optional[Orientation]:
    """Orientation of x as a departure of f, or None if x is not a departure."""
    x = as_fraction(x)
    if x == 0:
        return None
    side = Side.RIGHT if x > 0 else Side.LEFT
    for segment in departure_segments(f, side):
        if segment.contains(x):
            return segment.orientation
    return None


def _contour_records(f: PLMap, side: Side) -> tuple[DepartureRecord, ...]:
    segments = departure_segments(f, side)
    records = []
    for k, segment in enumerate(segments):
        following = segments[k + 1] if k + 1 < len(segments) else None
        if following is None or following.orientation is not segment.orientation:
            records.append(
                DepartureRecord(
                    segment.outer, evaluate(f, segment.outer), segment.orientation, side
                )
            )
    return tuple(records)


def one_sided_contour_points(f: PLMap, side: Side) -> tuple[DepartureRecord, ...]:
    """Contour points of f on one side, ordered from 0 outward."""
    _require_pointed(f)
    _check_side(f, side)
    return _contour_records(f, side)


def contour_points(f: PLMap) -> ContourData:
    """
    Right and left contour points of a pointed map.

    A contour point is the outer end of a maximal run of same-orientation
    departure segments.

    Raises:
        DegenerateSideError: If either side of f is constant
    """
    _require_pointed(f)
    _check_side(f, Side.RIGHT)
    _check_side(f, Side.LEFT)
    return ContourData(
        right=_contour_records(f, Side.RIGHT), left=_contour_records(f, Side.LEFT)
    )


def contour_factor(f: PLMap, side: Side = Side.RIGHT) -> PLMap:
    """
    One-sided contour factor on [0, 1]: ``t(i/n) = f(αᵢ)``, linear between.

    For the left side the factor of ``f∘r`` is returned.
    """
    records = one_sided_contour_points(f, side)
    n = len(records)
    points = [(ZERO, ZERO)] + [
        (Fraction(i, n), record.value) for i, record in enumerate(records, start=1)
    ]
    return canonicalize(PLMap(points))


def radial_contour_factor(f: PLMap) -> PointedPLMap:
    """
    Radial contour factor t_f of a pointed map.

    Right breakpoints ``(i/n, f(αᵢ))``, left breakpoints ``(-j/m, f(βⱼ))``,
    linear between and canonicalized.
    """
    data = contour_points(f)
    n, m = len(data.right), len(data.left)
    left = [(Fraction(-j, m), data.left[j - 1].value) for j in range(m, 0, -1)]
    right = [(Fraction(i, n), data.right[i - 1].value) for i in range(1, n + 1)]
    factor = PLMap([*left, (ZERO, ZERO), *right])
    return PointedPLMap(factor.canonical_points)


def _same_piece(t: PLMap, y0: Fraction, y1: Fraction) -> bool:
    low, high = min(y0, y1), max(y0, y1)
    return any(p <= low and high <= q for p, q in pairwise(t.xs))


def _one_sided_lift(f: PLMap, t: PLMap, pick: Pick = min) -> PLMap:
    """
    Lift s on [0, e] with t∘s = f and s(0) = 0, values in the domain of t.

    Nodes at each partition time are t-preimages of f; an edge joins nodes
    lying on one linear piece of t (equal nodes on constant cells of f).
    Only nodes that still reach the last time are offered to ``pick``.
    """
    cuts = set(f.xs)
    for value in set(t.ys):
        cuts.update(preimages(f, value))
    times = sorted(cuts)
    layers = [preimages(t, evaluate(f, x)) for x in times]
    layers[0] = [y for y in layers[0] if y == 0]
    constant = [evaluate(f, p) == evaluate(f, q) for p, q in pairwise(times)]

    def linked(k: int, y0: Fraction, y1: Fraction) -> bool:
        if constant[k]:
            return y0 == y1
        return _same_piece(t, y0, y1)

    reach = [set(layers[0])]
    for k in range(len(times) - 1):
        reach.append({y1 for y1 in layers[k + 1] if any(linked(k, y0, y1) for y0 in reach[k])})
    alive = [set() for _ in times]
    alive[-1] = reach[-1]
    for k in range(len(times) - 2, -1, -1):
        alive[k] = {y0 for y0 in reach[k] if any(linked(k, y0, y1) for y1 in alive[k + 1])}
    if not alive[0]:
        raise InvariantViolationError("No lift of f through t exists", check="lift")
    path = [ZERO]
    for k in range(len(times) - 1):
        path.append(pick(sorted(y1 for y1 in alive[k + 1] if linked(k, path[-1], y1))))
    return PLMap(zip(times, path), codomain=t.domain)


def meandering_lift(f: PLMap) -> PointedPLMap:
    """
    Minimal sign-preserving s with ``radial_contour_factor(f)∘s = f``.

    Args:
        f: Pointed map with both sides non-constant

    Returns:
        The lift with pointwise smallest |s|

    Raises:
        DegenerateSideError: If a side of f is constant
        InvariantViolationError: If the lift fails its factorization check
    """
    t = radial_contour_factor(f)
    right = _one_sided_lift(side_view(f, Side.RIGHT), side_view(t, Side.RIGHT))
    left = _one_sided_lift(side_view(f, Side.LEFT), side_view(t, Side.LEFT))
    left_points = [(-x, -y) for x, y in reversed(left.points)]
    lift = PointedPLMap(PLMap([*left_points[:-1], *right.points]).canonical_points)
    if compose(t, lift) != f:
        raise InvariantViolationError(
            "Lift does not factor the map", check="factorization", witness=lift
        )
    logger.debug("meandering lift built", breakpoints=len(lift))
    return lift


def lift_through(f: PLMap, t: PLMap, pick: Pick = min) -> PointedPLMap:
    """
    Some s with s(0) = 0 and ``t∘s = f``, free to change sign.

    Both halves of s are lifted through the whole of t. ``pick`` chooses the
    next node among the admissible ones (sorted); any choice completes.

    Raises:
        InvariantViolationError: If f does not factor through t
    """
    _require_pointed(f)
    _require_pointed(t)
    right = _one_sided_lift(side_view(f, Side.RIGHT), t, pick)
    left = _one_sided_lift(side_view(f, Side.LEFT), t, pick)
    left_points = [(-x, y) for x, y in reversed(left.points)]
    lift = PointedPLMap(PLMap([*left_points[:-1], *right.points]).canonical_points)
    if compose(t, lift) != f:
        raise InvariantViolationError(
            "Lift does not factor the map", check="factorization", witness=lift
        )
    return lift


def pair_orientation(f: PLMap, x1: Fraction, x2: Fraction) -> Optional[Orientation]:
    """
    Classify the pair ⟨x1, x2⟩ for f.

    Positive iff ``f(x1) < f(p) < f(x2)`` for all p in (x1, x2); negative is
    the mirror. Checking the breakpoints inside the pair is exact.
    """
    v1, v2 = evaluate(f, x1), evaluate(f, x2)
    inner = [y for x, y in f.points if x1 < x < x2]
    if v1 < v2 and all(v1 < y < v2 for y in inner):
        return Orientation.POSITIVE
    if v2 < v1 and all(v2 < y < v1 for y in inner):
        return Orientation.NEGATIVE
    return None


def _positive_candidates(
    f: PLMap,
    x1_min: Optional[Fraction] = None,
    x2_above: Optional[Fraction] = None,
) -> Iterator[RadialDepartureWitness]:
    """
    Positive radial departures among outer segment ends.

    Any positive witness can be pushed outward to the outer ends of the
    record segments containing its endpoints, so this search is complete.
    """
    a, _ = f.domain
    low = a if x1_min is None else max(a, x1_min)
    rights = [
        segment.outer
        for segment in departure_segments(f, Side.RIGHT)
        if segment.orientation is Orientation.POSITIVE
        and (x2_above is None or segment.outer > x2_above)
    ]
    lefts = []
    for segment in departure_segments(f, Side.LEFT):
        if segment.orientation is Orientation.NEGATIVE:
            x1 = max(segment.outer, low)
            if x1 < segment.inner:
                lefts.append(x1)
    for x2 in rights:
        for x1 in lefts:
            if pair_orientation(f, x1, x2) is Orientation.POSITIVE:
                yield RadialDepartureWitness(x1, x2, Orientation.POSITIVE)


def _candidates(
    f: PLMap,
    orientation: Orientation,
    x1_min: Optional[Fraction] = None,
    x2_above: Optional[Fraction] = None,
) -> Iterator[RadialDepartureWitness]:
    if orientation is Orientation.POSITIVE:
        yield from _positive_candidates(f, x1_min, x2_above)
        return
    for witness in _positive_candidates(negate(f), x1_min, x2_above):
        yield RadialDepartureWitness(witness.x1, witness.x2, Orientation.NEGATIVE)


def radial_departure_exists(
    f: PLMap,
    orientation: Orientation,
    *,
    x1_min: Optional[Scalar] = None,
    x2_above: Optional[Scalar] = None,
) -> Optional[RadialDepartureWitness]:
    """
    Decide whether f has a radial departure of the given orientation.

    Args:
        f: Pointed PL map
        orientation: Orientation to look for
        x1_min: Only consider pairs with x1 >= x1_min
        x2_above: Only consider pairs with x2 > x2_above

    Returns:
        A verified witness, or None
    """
    _require_pointed(f)
    x1_min = None if x1_min is None else as_fraction(x1_min)
    x2_above = None if x2_above is None else as_fraction(x2_above)
    witness = next(_candidates(f, orientation, x1_min, x2_above), None)
    if witness is not None and pair_orientation(f, witness.x1, witness.x2) is not orientation:
        raise InvariantViolationError(
            "Witness failed pointwise verification", check="radial_departure", witness=witness
        )
    return witness


def radial_departures(f: PLMap) -> list[RadialDepartureWitness]:
    """Representative witnesses of both orientations (outer segment ends)."""
    _require_pointed(f)
    return [*_candidates(f, Orientation.POSITIVE), *_candidates(f, Orientation.NEGATIVE)]


def radial_departure_through(f: PLMap, x1: Scalar, x2: Scalar) -> Optional[Orientation]:
    """
    Classify one specific pair ⟨x1, x2⟩.

    Raises:
        DomainError: Unless -1 <= x1 < 0 < x2 <= 1 inside the domain of f
    """
    x1, x2 = as_fraction(x1), as_fraction(x2)
    a, b = f.domain
    if not (max(a, -1) <= x1 < 0 < x2 <= min(b, 1)):
        raise DomainError(
            "A radial pair needs -1 <= x1 < 0 < x2 <= 1",
            details={"x1": format_scalar(x1), "x2": format_scalar(x2)},
        )
    return pair_orientation(f, x1, x2)


def realizing_departure(t: PLMap, x1: Scalar, x2: Scalar) -> Optional[RadialDepartureWitness]:
    """
    Negative radial departure ⟨w1, w2⟩ of t with t(w1) = x2 and t(w2) = x1.

    Both w1 and w2 are forced to be the first hits of their values moving
    away from 0, so a single candidate is checked.
    """
    x1, x2 = as_fraction(x1), as_fraction(x2)
    if not x1 < 0 < x2:
        return None
    a, b = t.domain
    w1 = first_hit(t, x2, 0, a)
    w2 = first_hit(t, x1, 0, b)
    if w1 is None or w2 is None:
        return None
    if pair_orientation(t, w1, w2) is Orientation.NEGATIVE:
        return RadialDepartureWitness(w1, w2, Orientation.NEGATIVE)
    return None


def reach(t: PLMap, y: Scalar) -> Fraction:
    """
    The function L: minimal L > 0 with ``t([0, L]) ⊇ t([y, 0])``.

    Args:
        t: Pointed PL map
        y: Negative point

    Returns:
        L(y), a right departure of t

    Raises:
        DomainError: If y >= 0, or t vanishes on [y, 0]
        NotLiftableError: If ``t([0, 1])`` does not contain ``t([y, 0])``
    """
    y = as_fraction(y)
    if y >= 0:
        raise DomainError("L is defined for y < 0", details={"y": format_scalar(y)})
    _, b = t.domain
    lo, hi = image(t, y, 0)
    right_lo, right_hi = image(t, 0, b)
    if lo < right_lo or hi > right_hi:
        raise NotLiftableError(
            y=format_scalar(y),
            details={
                "left_image": [format_scalar(lo), format_scalar(hi)],
                "right_image": [format_scalar(right_lo), format_scalar(right_hi)],
            },
        )
    if lo == hi:
        raise DomainError(
            "t vanishes on [y, 0]; there is no minimal positive reach",
            details={"y": format_scalar(y)},
        )
    hits = []
    if hi > 0:
        hits.append(first_hit(t, hi, 0, b))
    if lo < 0:
        hits.append(first_hit(t, lo, 0, b))
    return max(hits)


L = reach


def is_liftable_range(t: PLMap, y_minus: Scalar, y_plus: Scalar) -> bool:
    """
    Decide whether [y_minus, y_plus] is a liftable range for t.

    Conditions: ``t([0,1]) ⊇ t([y_minus, 0])`` and no radial departure
    ⟨y1, y2⟩ of t has ``y_minus <= y1`` and ``y_plus < y2``.

    Raises:
        DomainError: Unless -1 <= y_minus <= 0 <= y_plus <= 1
    """
    y_minus, y_plus = as_fraction(y_minus), as_fraction(y_plus)
    if not (-1 <= y_minus <= 0 <= y_plus <= 1):
        raise DomainError(
            "A liftable range satisfies -1 <= y- <= 0 <= y+ <= 1",
            details={"y_minus": format_scalar(y_minus), "y_plus": format_scalar(y_plus)},
        )
    _require_pointed(t)
    if y_minus < 0:
        lo, hi = image(t, y_minus, 0)
        right_lo, right_hi = image(t, 0, t.domain[1])
        if lo < right_lo or hi > right_hi:
            return False
    for orientation in Orientation:
        witness = radial_departure_exists(t, orientation, x1_min=y_minus, x2_above=y_plus)
        if witness is not None:
            logger.debug("range spanned by radial departure", witness=str(witness))
            return False
    return True


def liftable_from_departure(t: PLMap, s: PLMap, x: Scalar, x_prime: Scalar) -> bool:
    """
    Check the liftable-condition lemma on [x, x'] and return its conclusion.

    Hypotheses: x = 0 or x is a positive right departure of s,
    ``s([x, x']) = [y-, s(x)]`` with y- < 0, and t is the radial contour
    factor of ``t∘s``. When s stays nonnegative on [x, x'] the answer is
    trivially true.

    Raises:
        DomainError: Unless 0 <= x < x' <= 1
        HypothesisError: Listing every unmet hypothesis
    """
    x, x_prime = as_fraction(x), as_fraction(x_prime)
    if not (0 <= x < x_prime <= 1):
        raise DomainError(
            "Need 0 <= x < x' <= 1",
            details={"x": format_scalar(x), "x_prime": format_scalar(x_prime)},
        )
    lo, hi = image(s, x, x_prime)
    if lo >= 0:
        return True
    y_plus = evaluate(s, x)
    failed = []
    if x != 0 and departure_orientation(s, x) is not Orientation.POSITIVE:
        failed.append("x is a positive right departure of s (or x = 0)")
    if hi != y_plus:
        failed.append("s([x, x']) = [y-, y+] with y+ = s(x)")
    if radial_contour_factor(compose(t, s)) != t:
        failed.append("t is the radial contour factor of t∘s")
    if failed:
        raise HypothesisError("Liftable-condition hypotheses not met", failed=failed)
    return is_liftable_range(t, lo, y_plus)
