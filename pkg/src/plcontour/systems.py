"""
Inverse-System Prefixes
=======================

Finite prefixes f1, …, fN of inverse systems on [-1, 1]: composing and
dropping bonding maps, the same-contour chain check, rewiring into
⟨s̃ₙ∘tₙ₊₂⟩ for odd n, the coordinate map h and zig-zag certificates.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Optional, Sequence

from .bridging import BridgedFactor, build_bridged_s
from .config import settings
from .contour import radial_contour_factor, radial_departure_exists
from .plmap import (
    Orientation,
    PLMap,
    PointedPLMap,
    Scalar,
    as_fraction,
    compose,
    evaluate,
    format_scalar,
)
from .schemas.reports import (
    ChainReport,
    OrientationReport,
    RewireCertificate,
    RewireSummary,
    ZigzagReport,
)
from .utils.exceptions import (
    DegenerateSideError,
    DomainError,
    HypothesisError,
    InvariantViolationError,
    ThreadError,
)
from .utils.logger import LogContext, get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class SystemPrefix:
    """
    Bonding maps f1, …, fN with fₙ mapping level n+1 to level n.

    Indexing through :meth:`bonding` is 1-based, as in the inverse system.
    """

    maps: tuple[PLMap, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.maps:
            raise DomainError("A system prefix needs at least one bonding map")
        for n, f in enumerate(self.maps, start=1):
            if f.domain != (Fraction(-1), Fraction(1)):
                raise DomainError(
                    "Bonding maps act on [-1, 1]",
                    details={"level": n, "domain": [format_scalar(v) for v in f.domain]},
                )

    @classmethod
    def of(cls, maps: Iterable[PLMap]) -> "SystemPrefix":
        return cls(tuple(maps))

    def bonding(self, n: int) -> PLMap:
        if not 1 <= n <= len(self.maps):
            raise DomainError("Bonding map index out of range", details={"n": n})
        return self.maps[n - 1]

    def pointed(self) -> "SystemPrefix":
        """The same prefix with every map validated as pointed."""
        return SystemPrefix(tuple(PointedPLMap.from_map(f) for f in self.maps))

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self) -> Iterator[PLMap]:
        return iter(self.maps)


@dataclass(frozen=True)
class RewireFactor:
    """tₙ and s̃ₙ for one odd level n."""

    index: int
    t: PLMap
    s_tilde: PLMap
    bridged: BridgedFactor


@dataclass(frozen=True)
class CoordinateMapDescription:
    """The rule k ↦ s̃₂ₖ₋₁ applied to coordinate 2k+1."""

    factor_levels: tuple[int, ...]

    def rules(self) -> list[str]:
        return [
            f"h_{k} = s~_{n}(x_{n + 2})" for k, n in enumerate(self.factor_levels, start=1)
        ]


@dataclass(frozen=True)
class RewireResult:
    source: SystemPrefix
    rewired: SystemPrefix
    factors: tuple[RewireFactor, ...]
    summary: RewireSummary
    coordinate_map: CoordinateMapDescription

    @property
    def passed(self) -> bool:
        return self.summary.passed


def composite(p: SystemPrefix, n: int, m: int) -> PLMap:
    """fⁿᵐ = fₙ∘fₙ₊₁∘…∘fₘ₋₁ for 1 <= n < m <= N+1."""
    if not 1 <= n < m <= len(p) + 1:
        raise DomainError("Composite range out of bounds", details={"n": n, "m": m})
    return reduce(compose, p.maps[n - 1 : m - 1])


def compose_schedule(p: SystemPrefix, cut_indices: Sequence[int]) -> SystemPrefix:
    """
    Compose bonding maps between consecutive cuts.

    Args:
        p: Prefix of length N
        cut_indices: Strictly increasing, starting at 1, at most N+1

    Returns:
        The prefix with bonding maps f^(n_(k+1))_(n_k)

    Raises:
        DomainError: If the cuts are malformed
    """
    cuts = list(cut_indices)
    if (
        len(cuts) < 2
        or cuts[0] != 1
        or any(b <= a for a, b in zip(cuts, cuts[1:]))
        or cuts[-1] > len(p) + 1
    ):
        raise DomainError(
            "Cuts must increase strictly from 1 up to at most N+1",
            details={"cuts": cuts, "length": len(p)},
        )
    return SystemPrefix(tuple(composite(p, a, b) for a, b in zip(cuts, cuts[1:])))


def drop_prefix(p: SystemPrefix, n0: int) -> SystemPrefix:
    """Drop the bonding maps below level n0."""
    if not 1 <= n0 <= len(p):
        raise DomainError("Drop index out of range", details={"n0": n0, "length": len(p)})
    return SystemPrefix(p.maps[n0 - 1 :])


def check_same_contour_chain(p: SystemPrefix) -> ChainReport:
    """Check t(fₙ) = t(fₙ∘fₙ₊₁) for every consecutive pair, exactly."""
    for n in range(1, len(p)):
        f, g = p.bonding(n), p.bonding(n + 1)
        try:
            same = radial_contour_factor(f) == radial_contour_factor(compose(f, g))
        except DegenerateSideError:
            logger.info("constant side in chain", index=n)
            return ChainReport(passed=False, first_failure=n, degenerate=n)
        if not same:
            logger.info("contour chain breaks", index=n)
            return ChainReport(passed=False, first_failure=n)
    return ChainReport(passed=True)


def orientation_report(f: PLMap, index: int) -> OrientationReport:
    """Orientations present among the radial departures of f."""
    positive = radial_departure_exists(f, Orientation.POSITIVE)
    negative = radial_departure_exists(f, Orientation.NEGATIVE)
    if positive and negative:
        label = "both"
    elif positive:
        label = "positive-only"
    elif negative:
        label = "negative-only"
    else:
        label = "none"
    return OrientationReport(
        index=index,
        orientations=label,
        positive_witness=str(positive) if positive else None,
        negative_witness=str(negative) if negative else None,
    )


def check_zigzag_free(p: SystemPrefix) -> ZigzagReport:
    """Certificate that no bonding map has radial departures of both orientations."""
    reports = [orientation_report(f, n) for n, f in enumerate(p, start=1)]
    return ZigzagReport(
        certificate=all(report.zigzag_free for report in reports), maps=reports
    )


def _rewire_level(p: SystemPrefix, n: int) -> tuple[RewireFactor, PLMap, RewireCertificate]:
    with LogContext(stage="rewire", index=n):
        bridged = build_bridged_s(p.bonding(n), p.bonding(n + 1), p.bonding(n + 2))
        rewired = compose(bridged.s_tilde, bridged.t3)
        factor = RewireFactor(index=n, t=bridged.t1, s_tilde=bridged.s_tilde, bridged=bridged)
        certificate = RewireCertificate(
            index=n,
            factorization=compose(bridged.t1, bridged.s_tilde)
            == compose(p.bonding(n), p.bonding(n + 1)),
            zigzag=orientation_report(rewired, (n + 1) // 2),
            bridged=bridged.report,
        )
        logger.debug("level rewired", passed=certificate.passed)
    return factor, rewired, certificate


def rewire(p: SystemPrefix, jobs: Optional[int] = None) -> RewireResult:
    """
    Rewire a prefix into ⟨s̃ₙ∘tₙ₊₂⟩ over odd n with n+2 <= N.

    Args:
        p: Prefix of at least three pointed maps passing the chain check
        jobs: Worker threads for the independent odd levels

    Returns:
        Rewired prefix, factors and certificates

    Raises:
        HypothesisError: If the prefix is too short or the chain check fails
    """
    p = p.pointed()
    if len(p) < 3:
        raise HypothesisError(
            "Rewiring needs at least three bonding maps", failed=["N >= 3"]
        )
    chain = check_same_contour_chain(p)
    if not chain.passed:
        n = chain.first_failure
        raise HypothesisError(
            "Same-contour chain fails",
            failed=[f"t_f{n} = t_(f{n}∘f{n + 1})"],
            details={"index": n},
        )
    levels = list(range(1, len(p) - 1, 2))
    jobs = jobs or settings.schedule.jobs
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda n: _rewire_level(p, n), levels))
    else:
        results = [_rewire_level(p, n) for n in levels]

    consumed = {m for n in levels for m in (n, n + 1, n + 2)}
    trailing = [m for m in range(1, len(p) + 1) if m not in consumed]
    certificates = [certificate for _, _, certificate in results]
    summary = RewireSummary(
        passed=all(c.passed for c in certificates),
        certificates=certificates,
        trailing=trailing,
    )
    logger.info("prefix rewired", levels=levels, trailing=trailing, passed=summary.passed)
    return RewireResult(
        source=p,
        rewired=SystemPrefix(tuple(rewired for _, rewired, _ in results)),
        factors=tuple(factor for factor, _, _ in results),
        summary=summary,
        coordinate_map=CoordinateMapDescription(tuple(levels)),
    )


def check_thread(p: SystemPrefix, point_prefix: Sequence[Scalar]) -> list[Fraction]:
    """
    Validate fₙ(xₙ₊₁) = xₙ on every available level.

    Raises:
        ThreadError: Naming the first failing level
    """
    xs = [as_fraction(x) for x in point_prefix]
    for n in range(1, min(len(p), len(xs) - 1) + 1):
        if evaluate(p.bonding(n), xs[n]) != xs[n - 1]:
            raise ThreadError(
                "Coordinates do not form a thread",
                level=n,
                details={"x_n": format_scalar(xs[n - 1]), "x_n+1": format_scalar(xs[n])},
            )
    return xs


def coordinate_map_h(r: RewireResult, point_prefix: Sequence[Scalar]) -> list[Fraction]:
    """
    Image ⟨s̃₂ₖ₋₁(x₂ₖ₊₁)⟩ₖ of a thread, checked to be a thread of the rewired system.

    Raises:
        ThreadError: If the input is not a thread of the source prefix
        InvariantViolationError: If the image is not a thread of the rewired prefix
    """
    xs = check_thread(r.source, point_prefix)
    image = []
    for k, factor in enumerate(r.factors, start=1):
        if 2 * k + 1 > len(xs):
            break
        image.append(evaluate(factor.s_tilde, xs[2 * k]))
    for k in range(1, len(image)):
        if evaluate(r.rewired.bonding(k), image[k]) != image[k - 1]:
            raise InvariantViolationError(
                "Coordinate map does not produce a thread",
                check="rewired thread",
                witness=k,
            )
    return image
