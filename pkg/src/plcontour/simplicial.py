"""
Simplicial Systems
==================

Simplicial inverse systems of arcs: the defining check, Markov refinement
of a single bonding map, normalization of a thread to the zero thread,
the pigeonhole schedule over radial contour factors, and the end-to-end
pipeline feeding the rewiring procedure.
"""

from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import pairwise
from typing import Iterable, Optional, Sequence, Union

from .config import settings
from .contour import contour_points, radial_contour_factor
from .plmap import (
    PLMap,
    PointedPLMap,
    Scalar,
    as_fraction,
    compose,
    evaluate,
    format_scalar,
    inverse,
    is_constant_on,
    is_linear_on,
    preimages,
)
from .schemas.reports import (
    PipelineReport,
    ScheduleSummary,
    SimplicialReport,
    SimplicialViolation,
)
from .systems import RewireResult, SystemPrefix, check_thread, compose_schedule, rewire
from .utils.exceptions import (
    DegenerateSideError,
    DomainError,
    HypothesisError,
    InvariantViolationError,
    PLContourError,
    ScheduleBudgetError,
)
from .utils.logger import LogContext, get_logger

logger = get_logger(__name__)

ONE = Fraction(1)


class Verdict(str, Enum):
    """Degenerate outcomes that settle accessibility without rewiring."""

    ENDPOINT = "endpoint"
    ARC_OR_POINT = "arc-or-point"
    CONSTANT_SIDE = "constant-side"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SimplicialSystem:
    """
    A system prefix with finite sets S1, …, S(N+1), each containing ±1.

    ``sets[n - 1]`` is Sₙ, sorted.
    """

    prefix: SystemPrefix
    sets: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        sets = tuple(tuple(sorted({as_fraction(x) for x in s})) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if len(sets) != len(self.prefix) + 1:
            raise DomainError(
                "A system of N maps needs N+1 finite sets",
                details={"maps": len(self.prefix), "sets": len(sets)},
            )
        for n, s in enumerate(sets, start=1):
            if s[0] != -1 or s[-1] != 1:
                raise DomainError(
                    "Every set must contain -1 and 1 and lie in [-1, 1]",
                    details={"level": n, "set": [format_scalar(x) for x in s]},
                )

    @classmethod
    def of(
        cls, maps: Iterable[PLMap], sets: Iterable[Iterable[Scalar]]
    ) -> "SimplicialSystem":
        return cls(SystemPrefix.of(maps), tuple(tuple(s) for s in sets))

    def level_set(self, n: int) -> tuple[Fraction, ...]:
        return self.sets[n - 1]

    def __len__(self) -> int:
        return len(self.prefix)


@dataclass(frozen=True)
class NormalizationMaps:
    """Increasing PL homeomorphisms hₙ with hₙ(xₙ) = 0 and kinks only on Sₙ."""

    maps: tuple[PLMap, ...]

    def apply(self, thread: Sequence[Scalar]) -> list[Fraction]:
        return [evaluate(h, x) for h, x in zip(self.maps, thread)]


@dataclass(frozen=True)
class NormalizedSystem:
    system: SimplicialSystem
    maps: NormalizationMaps


@dataclass(frozen=True)
class Schedule:
    """Cut indices n1 = 1 < n2 < … and the contour-factor key of each stage."""

    cuts: tuple[int, ...]
    keys: tuple[str, ...] = ()
    unscheduled: tuple[int, ...] = ()

    def summary(self) -> ScheduleSummary:
        return ScheduleSummary(
            cuts=list(self.cuts), keys=list(self.keys), unscheduled=list(self.unscheduled)
        )


@dataclass
class PipelineResult:
    """Outcome of :func:`pipeline`: a verdict, or a rewiring with its inputs."""

    simplicial: SimplicialReport
    verdict: Optional[Verdict] = None
    normalized: Optional[NormalizedSystem] = None
    schedule: Optional[Schedule] = None
    rewired: Optional[RewireResult] = None
    stages: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if self.verdict is not None:
            return True
        return self.rewired is not None and self.rewired.passed

    def report(self) -> PipelineReport:
        return PipelineReport(
            passed=self.passed,
            verdict=str(self.verdict) if self.verdict else None,
            simplicial=self.simplicial,
            schedule=self.schedule.summary() if self.schedule else None,
            rewire=self.rewired.summary if self.rewired else None,
        )


def _format_set(points: Iterable[Fraction]) -> list[str]:
    return [format_scalar(x) for x in points]


def _level_violations(
    f: PLMap, level: int, upper: tuple[Fraction, ...], lower: tuple[Fraction, ...]
) -> list[SimplicialViolation]:
    violations = []
    lower_set = set(lower)
    escaped = [x for x in upper if evaluate(f, x) not in lower_set]
    if escaped:
        violations.append(
            SimplicialViolation(
                level=level,
                clause="image",
                detail="f maps "
                + ", ".join(format_scalar(x) for x in escaped)
                + " outside S",
            )
        )
    for a, b in pairwise(upper):
        if is_constant_on(f, a, b):
            continue
        if not is_linear_on(f, a, b):
            violations.append(
                SimplicialViolation(
                    level=level,
                    clause="component",
                    component=_format_set((a, b)),
                    detail="not linear on the component",
                )
            )
            continue
        lo, hi = sorted((evaluate(f, a), evaluate(f, b)))
        hit = lower[bisect_right(lower, lo) : bisect_left(lower, hi)]
        if hit:
            violations.append(
                SimplicialViolation(
                    level=level,
                    clause="component",
                    component=_format_set((a, b)),
                    detail="image meets S at " + ", ".join(_format_set(hit)),
                )
            )
    return violations


def check_simplicial(system: SimplicialSystem) -> SimplicialReport:
    """
    Check fₙ(Sₙ₊₁) ⊆ Sₙ and the component condition at every level.

    Each component of [-1, 1] minus Sₙ₊₁ must be mapped constantly, or
    linearly onto an open interval missing Sₙ.
    """
    violations: list[SimplicialViolation] = []
    for n, f in enumerate(system.prefix, start=1):
        violations.extend(
            _level_violations(f, n, system.level_set(n + 1), system.level_set(n))
        )
    report = SimplicialReport(passed=not violations, violations=violations)
    if violations:
        logger.warning(
            "system is not simplicial",
            violations=len(violations),
            first_level=violations[0].level,
        )
    return report


def markov_refine(f: PLMap, s1: Iterable[Scalar], depth: int) -> SimplicialSystem:
    """
    Simplicial system of ``depth`` copies of f by pulling S1 back.

    Sₙ₊₁ is f⁻¹(Sₙ) together with the breakpoints of f and ±1.

    Args:
        f: Bonding map on [-1, 1]
        s1: Initial set; must contain ±1, the breakpoint values of f and f(S1)
        depth: Number of bonding maps

    Raises:
        HypothesisError: Listing the points S1 is missing
        DomainError: If depth is not positive
    """
    if depth < 1:
        raise DomainError("Depth must be positive", details={"depth": depth})
    base = {as_fraction(x) for x in s1}
    required = {-ONE, ONE} | set(f.ys) | {evaluate(f, x) for x in base if -1 <= x <= 1}
    missing = sorted(required - base)
    if missing:
        raise HypothesisError(
            "Initial set is not closed under the bonding map",
            failed=[f"{format_scalar(y)} in S1" for y in missing],
            details={"missing": _format_set(missing)},
        )
    sets = [tuple(sorted(base))]
    for _ in range(depth):
        pulled = {x for y in sets[-1] for x in preimages(f, y)}
        sets.append(tuple(sorted(pulled | set(f.xs) | {-ONE, ONE})))
    system = SimplicialSystem(SystemPrefix((f,) * depth), tuple(sets))
    logger.debug("markov refinement built", depth=depth, sizes=[len(s) for s in sets])
    return system


def _spread(count: int, start: Fraction, end: Fraction) -> list[Fraction]:
    if count == 0:
        return [start]
    return [start + (end - start) * Fraction(k, count) for k in range(count + 1)]


def normalizing_map(level_set: Sequence[Fraction], x: Fraction, level: int = 0) -> PLMap:
    """
    Increasing PL homeomorphism h with h(x) = 0 and kinks only on the set.

    Points left of the component holding x spread evenly up to its image,
    points right of it likewise, and the component maps linearly.

    Raises:
        DomainError: If no such map exists for this set and point
    """
    s = list(level_set)
    if x in s:
        lo_index = hi_index = s.index(x)
        left_end = right_end = Fraction(0)
    else:
        hi_index = bisect_left(s, x)
        lo_index = hi_index - 1
        ratio = (x - s[lo_index]) / (s[hi_index] - s[lo_index])
        outer_left, outer_right = lo_index == 0, hi_index == len(s) - 1
        if outer_left and outer_right:
            width = Fraction(2)
        elif outer_left:
            width = 1 / ratio
        elif outer_right:
            width = 1 / (1 - ratio)
        else:
            width = ONE
        left_end, right_end = -ratio * width, (1 - ratio) * width
        feasible = (left_end == -1) is outer_left and (right_end == 1) is outer_right
        if not feasible or left_end < -1 or right_end > 1:
            raise DomainError(
                "No normalizing homeomorphism is linear on the component holding the point",
                details={"level": level, "x": format_scalar(x), "set": _format_set(s)},
            )
    points = dict(zip(s[: lo_index + 1], _spread(lo_index, -ONE, left_end)))
    points.update(zip(s[hi_index:], _spread(len(s) - 1 - hi_index, right_end, ONE)))
    points[x] = Fraction(0)
    return PLMap(sorted(points.items()))


def normalize_point(
    system: SimplicialSystem, thread: Sequence[Scalar]
) -> Union[NormalizedSystem, Verdict]:
    """
    Conjugate the system so that the given thread becomes the zero thread.

    Args:
        system: Simplicial system with N maps
        thread: Coordinates x1, …, x(N+1) with fₙ(xₙ₊₁) = xₙ

    Returns:
        The conjugated system with its maps hₙ, or a degenerate verdict

    Raises:
        ThreadError: If the coordinates are not a thread
        DomainError: If the thread has the wrong length or cannot be normalized
        InvariantViolationError: If the conjugated system fails re-verification
    """
    if len(thread) != len(system.sets):
        raise DomainError(
            "A thread needs one coordinate per level",
            details={"levels": len(system.sets), "coordinates": len(thread)},
        )
    xs = check_thread(system.prefix, thread)
    if any(abs(x) == 1 for x in xs):
        logger.info("thread reaches an endpoint of the arc")
        return Verdict.ENDPOINT
    if all(len(s) == 2 for s in system.sets):
        logger.info("no interior simplicial points")
        return Verdict.ARC_OR_POINT

    hs = tuple(
        normalizing_map(s, x, level=n)
        for n, (s, x) in enumerate(zip(system.sets, xs), start=1)
    )
    maps = []
    for n, f in enumerate(system.prefix, start=1):
        conjugated = compose(hs[n - 1], compose(f, inverse(hs[n])))
        if compose(conjugated, hs[n]) != compose(hs[n - 1], f):
            raise InvariantViolationError(
                "Conjugation does not commute", check="conjugation", witness=n
            )
        maps.append(PointedPLMap.from_map(conjugated))
    sets = tuple(
        tuple(evaluate(h, x) for x in s) for h, s in zip(hs, system.sets)
    )
    normalized = SimplicialSystem(SystemPrefix(tuple(maps)), sets)
    report = check_simplicial(normalized)
    if not report.passed:
        raise InvariantViolationError(
            "Normalized system is not simplicial",
            check="simplicial",
            witness=report.violations[0].level,
        )
    logger.info("thread normalized", levels=len(hs))
    return NormalizedSystem(system=normalized, maps=NormalizationMaps(hs))


def contour_key(f: PLMap) -> str:
    """Exact key of the radial contour factor of a pointed map."""
    factor = radial_contour_factor(f)
    return " ".join(f"{format_scalar(x)}:{format_scalar(y)}" for x, y in factor.points)


def _stage_composites(
    prefix: SystemPrefix, start: int, frontier: list[int]
) -> list[PLMap]:
    composites = []
    current: Optional[PLMap] = None
    reached = start
    for m in frontier:
        for level in range(reached, m):
            f = prefix.bonding(level)
            current = f if current is None else compose(current, f)
        reached = m
        composites.append(current)
    return composites


def _check_key_values(f: PLMap, allowed: tuple[Fraction, ...], m: int) -> None:
    data = contour_points(f)
    allowed_set = set(allowed)
    for record in (*data.right, *data.left):
        if record.value not in allowed_set:
            raise InvariantViolationError(
                "Contour value outside the simplicial set",
                check="contour-key finiteness",
                witness=f"{format_scalar(record.value)} at m={m}",
            )


def check_schedule(prefix: SystemPrefix, schedule: Schedule) -> None:
    """
    Verify t(Fₖ) = t(Fₖ∘Fₖ₊₁) for consecutive stages of a schedule.

    Raises:
        InvariantViolationError: Naming the first failing stage
    """
    stages = compose_schedule(prefix, schedule.cuts)
    for k in range(1, len(stages)):
        f, g = stages.bonding(k), stages.bonding(k + 1)
        if radial_contour_factor(f) != radial_contour_factor(compose(f, g)):
            raise InvariantViolationError(
                "Schedule stages disagree on the radial contour factor",
                check="schedule",
                witness=k,
            )


def _stage_keys(composites: list[PLMap]) -> list[str]:
    jobs = settings.schedule.jobs
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(contour_key, composites))
    return [contour_key(g) for g in composites]


def find_schedule(
    system: SimplicialSystem, depth_budget: Optional[int] = None
) -> Union[Schedule, Verdict]:
    """
    Greedy pigeonhole over radial contour factors of composites.

    At each stage the composites f^m from the current cut are grouped by
    contour-factor key over the frontier members within ``depth_budget``
    levels. The next cut is the smallest m whose key recurs later, and the
    frontier shrinks to that class. Members beyond the window are carried to
    the next stage; when one of them comes up as a cut it must first match
    the key of the stage it skipped. A lone window member closes the schedule.
    Levels beyond the final cut are reported as ``unscheduled``.

    Returns:
        A verified Schedule, or ``Verdict.CONSTANT_SIDE`` when a composite has
        a constant side

    Raises:
        HypothesisError: If the system is not pointed at zero
        ScheduleBudgetError: If a stage with several candidates finds no recurring key
    """
    budget = depth_budget or settings.schedule.budget
    prefix = system.prefix
    try:
        prefix = prefix.pointed()
    except DomainError:
        raise HypothesisError(
            "Scheduling needs a system normalized to the zero thread",
            failed=["f_n(0) = 0"],
        ) from None

    cuts = [1]
    keys: list[str] = []
    frontier = list(range(2, len(prefix) + 2))
    # members not keyed at the previous stage, and that stage's composite
    unchecked: set[int] = set()
    previous: Optional[PLMap] = None
    stage = 1
    while frontier:
        start = cuts[-1]
        if len(frontier) == 1 and frontier[0] not in unchecked:
            cuts.append(frontier[0])
            break
        window = [m for m in frontier if m - start <= budget]
        carried = [m for m in frontier if m - start > budget]
        if not window:
            logger.warning("frontier beyond the depth budget", start=start, carried=carried)
            break
        with LogContext(stage="schedule", index=stage):
            composites = _stage_composites(prefix, start, window)
            closing: Optional[int] = None
            try:
                for m, g in zip(window, composites):
                    _check_key_values(g, system.level_set(start), m)
                window_keys = _stage_keys(composites)
                census: dict[str, list[int]] = {}
                for m, key in zip(window, window_keys):
                    census.setdefault(key, []).append(m)

                def admitted(m: int, g: PLMap) -> bool:
                    return m not in unchecked or contour_key(compose(previous, g)) == keys[-1]

                chosen = next(
                    (
                        (m, key, g)
                        for m, key, g in zip(window, window_keys, composites)
                        if any(x > m for x in census[key]) and admitted(m, g)
                    ),
                    None,
                )
                if chosen is None and len(window) == 1 and stage > 1:
                    closing = window[0] if admitted(window[0], composites[0]) else None
            except DegenerateSideError:
                logger.info("composite with a constant side", start=start)
                return Verdict.CONSTANT_SIDE
            if chosen is None and (len(window) > 1 or stage == 1):
                logger.warning("no recurring contour factor", distinct=len(census))
                raise ScheduleBudgetError(
                    "No radial contour factor recurs within the depth budget",
                    stage=stage,
                    census=census,
                    details={"budget": budget, "start": start},
                )
            if chosen is None:
                logger.debug("closing on the last window member", cut=closing)
                if closing is not None:
                    cuts.append(closing)
                break
            m, key, previous = chosen
            logger.debug("stage cut", cut=m, class_size=len(census[key]), carried=len(carried))
        cuts.append(m)
        keys.append(key)
        frontier = sorted([x for x in census[key] if x > m] + carried)
        unchecked = set(carried)
        stage += 1

    unscheduled = tuple(range(cuts[-1] + 1, len(prefix) + 2))
    schedule = Schedule(cuts=tuple(cuts), keys=tuple(keys), unscheduled=unscheduled)
    check_schedule(prefix, schedule)
    if unscheduled:
        logger.warning("levels left unscheduled", unscheduled=list(unscheduled))
    logger.info("schedule found", cuts=cuts)
    return schedule


def pipeline(
    system: SimplicialSystem,
    thread: Sequence[Scalar],
    depth_budget: Optional[int] = None,
    jobs: Optional[int] = None,
) -> PipelineResult:
    """
    Normalize, schedule, compose and rewire a simplicial system.

    Errors raised by a stage carry that stage's name under ``details["stage"]``.

    Raises:
        HypothesisError: If the system is not simplicial
    """
    report = check_simplicial(system)
    result = PipelineResult(simplicial=report)
    if not report.passed:
        raise HypothesisError(
            "Input system is not simplicial",
            failed=[f"level {v.level}: {v.clause}" for v in report.violations],
            details={"stage": "check"},
        )

    def run(stage: str, fn, *args, **kwargs):
        result.stages.append(stage)
        with LogContext(stage=stage):
            try:
                return fn(*args, **kwargs)
            except PLContourError as exc:
                exc.details.setdefault("stage", stage)
                raise

    normalized = run("normalize", normalize_point, system, thread)
    if isinstance(normalized, Verdict):
        result.verdict = normalized
        return result
    result.normalized = normalized

    schedule = run("schedule", find_schedule, normalized.system, depth_budget)
    if isinstance(schedule, Verdict):
        result.verdict = schedule
        return result
    result.schedule = schedule

    composed = run("compose", compose_schedule, normalized.system.prefix, schedule.cuts)
    result.rewired = run("rewire", rewire, composed, jobs)
    logger.info("pipeline finished", passed=result.passed, cuts=list(schedule.cuts))
    return result
