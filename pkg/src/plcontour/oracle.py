"""
Brute-Force Oracles
===================

Independent validators for the decision procedures in ``contour``.

Each oracle evaluates the defining quantifiers literally over a finite
grid. The grid always contains every breakpoint, so for PL data the checks
are exact rather than approximate.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import pairwise
from math import ceil, floor
from typing import Iterable, Optional

from .config import settings
from .contour import ContourData, DepartureRecord, RadialDepartureWitness, side_view
from .plmap import (
    Orientation,
    PLMap,
    Side,
    evaluate,
    format_scalar,
    image,
    preimages,
)
from .utils.exceptions import DegenerateSideError, DomainError
from .utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """All multiples of 1/resolution, plus the breakpoints of the maps involved."""

    resolution: int = field(default_factory=lambda: settings.oracle.grid)

    def __post_init__(self) -> None:
        if self.resolution < 1:
            raise DomainError(
                "Grid resolution must be positive", details={"resolution": self.resolution}
            )

    def refine(self) -> "GridSpec":
        return GridSpec(self.resolution * 2)

    def points(self, a: Fraction, b: Fraction, maps: Iterable[PLMap] = ()) -> list[Fraction]:
        """Grid points in [a, b]: multiples of 1/d, endpoints, breakpoints and zeros."""
        d = self.resolution
        found = {a, b}
        found.update(Fraction(k, d) for k in range(ceil(a * d), floor(b * d) + 1))
        for f in maps:
            found.update(x for x in f.xs if a <= x <= b)
            found.update(x for x in preimages(f, 0) if a <= x <= b)
        return sorted(found)


@dataclass(frozen=True)
class FactorizationCheck:
    """Outcome of a compose-and-compare check."""

    holds: bool
    first_disagreement: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.holds


def _classify(v1: Fraction, v2: Fraction, low: Fraction, high: Fraction) -> Optional[Orientation]:
    """Orientation of a pair with end values v1, v2 and values in [low, high] between."""
    if v1 < low and high < v2:
        return Orientation.POSITIVE
    if v2 < low and high < v1:
        return Orientation.NEGATIVE
    return None


def oracle_radial_departures(f: PLMap, grid: Optional[GridSpec] = None) -> list[RadialDepartureWitness]:
    """
    Every grid pair ⟨x1, x2⟩ that is a radial departure of f.

    The pointwise definition is evaluated at every grid point and breakpoint
    strictly inside the pair.
    """
    grid = grid or GridSpec()
    a, b = f.domain
    points = grid.points(max(a, Fraction(-1)), min(b, Fraction(1)), [f])
    values = [evaluate(f, x) for x in points]
    found = []
    for k, x1 in enumerate(points):
        if x1 >= 0:
            break
        low = high = None
        for m in range(k + 1, len(points)):
            x2 = points[m]
            if x2 > 0:
                orientation = _classify(values[k], values[m], low, high)
                if orientation is not None:
                    found.append(RadialDepartureWitness(x1, x2, orientation))
            # running extremes over the points strictly inside the next pair
            low = values[m] if low is None else min(low, values[m])
            high = values[m] if high is None else max(high, values[m])
    logger.debug("oracle radial departures", resolution=grid.resolution, found=len(found))
    return found


def _is_right_departure(g: PLMap, x: Fraction) -> bool:
    """Literal check of ``g(x) ∉ g([0, x))`` on a one-sided map."""
    before = [evaluate(g, 0)] + [y for p, y in g.points if 0 < p < x]
    value = evaluate(g, x)
    return value > max(before) or value < min(before)


def _one_sided_contour(g: PLMap, grid: GridSpec) -> list[tuple[Fraction, Fraction, Orientation]]:
    _, e = g.domain
    sample = set(grid.points(Fraction(0), e, [g]))
    for value in set(g.ys):
        sample.update(preimages(g, value))
    ordered = sorted(sample)
    sample.update((p + q) / 2 for p, q in pairwise(ordered))
    departures = []
    for x in sorted(sample):
        if x > 0 and _is_right_departure(g, x):
            value = evaluate(g, x)
            departures.append((x, value, Orientation.of(value)))

    contour = []
    for k, (alpha, value, orientation) in enumerate(departures):
        if alpha not in g.xs and alpha != e:
            continue
        # every later departure x needs an opposite one in (alpha, x]
        opposite_seen = False
        is_contour = True
        for _, _, later in departures[k + 1 :]:
            opposite_seen = opposite_seen or later is not orientation
            if not opposite_seen:
                is_contour = False
                break
        if is_contour:
            contour.append((alpha, value, orientation))
    return contour


def oracle_contour_points(f: PLMap, grid: Optional[GridSpec] = None) -> ContourData:
    """
    Contour points recomputed from the definition.

    α is a contour point iff α is a departure and every later departure x
    has an opposite-orientation departure y with α < y <= x.

    Raises:
        DegenerateSideError: If f is constant on a side
    """
    grid = grid or GridSpec()
    sides = {}
    for side in Side:
        g = side_view(f, side)
        lo, hi = image(g, *g.domain)
        if lo == hi:
            raise DegenerateSideError(f"Map is constant on the {side} side", side=side.value)
        sign = 1 if side is Side.RIGHT else -1
        sides[side] = tuple(
            DepartureRecord(sign * x, value, orientation, side)
            for x, value, orientation in _one_sided_contour(g, grid)
        )
    return ContourData(right=sides[Side.RIGHT], left=sides[Side.LEFT])


def oracle_factorization(t: PLMap, s: PLMap, f: PLMap) -> FactorizationCheck:
    """
    Exact check of ``t∘s = f`` on the refined common partition.

    The partition holds the breakpoints of s and f and the s-preimages of
    the breakpoints of t, so both sides are linear between partition points.
    """
    if s.domain != f.domain:
        return FactorizationCheck(False, s.domain[0])
    a, b = t.domain
    partition = set(s.xs) | set(f.xs)
    for c in t.xs:
        partition.update(preimages(s, c))
    for x in sorted(partition):
        y = evaluate(s, x)
        if not a <= y <= b or evaluate(t, y) != evaluate(f, x):
            logger.info("factorization disagrees", x=format_scalar(x))
            return FactorizationCheck(False, x)
    return FactorizationCheck(True)
