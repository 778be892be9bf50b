"""
Bridging
========

Lifting constructions that change s on selected intervals while keeping
``t∘s = f``: the stay-right lift, the two bridging lemmas (right and left
contour points), and the bridged factor s̃ for a triple f1, f2, f3.

Every constructed map is re-verified exactly before it is returned.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import pairwise
from typing import Optional

from .contour import (
    DepartureRecord,
    RadialDepartureWitness,
    departure_segments,
    is_liftable_range,
    meandering_lift,
    one_sided_contour_points,
    pair_orientation,
    radial_contour_factor,
    radial_departure_exists,
    reach,
    realizing_departure,
)
from .oracle import oracle_factorization
from .plmap import (
    Orientation,
    PLMap,
    PointedPLMap,
    Scalar,
    Side,
    as_fraction,
    compose,
    crossings,
    evaluate,
    first_hit,
    format_scalar,
    image,
    inverse,
    paste,
    preimages,
    reflect,
    restrict,
)
from .schemas.reports import BridgedReport, CheckResult
from .utils.exceptions import (
    CompositionError,
    DegenerateSideError,
    DomainError,
    HypothesisError,
    InvariantViolationError,
)
from .utils.logger import LogContext, get_logger

logger = get_logger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class StayRightCase(str, Enum):
    """Which construction the stay-right lift used."""

    ONE = "one"
    TWO = "two"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class StayRightPlan:
    """
    Data behind a stay-right lift.

    ``gamma`` is the largest right contour point of t below ``level = L(y-)``
    (or 0). In case two, ``gammas`` holds γ₀ < … < γₖ₊₁ = L(y-), ``deltas``
    holds δ₁ > … > δₖ₊₁ and ``crossings`` holds x₀, …, xₖ₊₁ in the source
    interval.
    """

    level: Fraction
    gamma: Fraction
    case: StayRightCase
    gammas: tuple[Fraction, ...] = ()
    deltas: tuple[Fraction, ...] = ()
    crossings: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class StayRightResult:
    lift: PLMap
    plan: Optional[StayRightPlan]


@dataclass(frozen=True)
class BridgeSiteI:
    """A bridged interval around a negative right contour point αᵢ."""

    index: int
    start: Fraction
    end: Fraction
    lifted: PLMap
    level: Fraction


@dataclass(frozen=True)
class BridgeSiteII:
    """A bridged interval around a negative left contour point βⱼ."""

    index: int
    partner: int
    start: Fraction
    end: Fraction
    lifted: PLMap
    level: Fraction
    x1: Optional[Fraction] = None
    x2: Optional[Fraction] = None


@dataclass(frozen=True)
class B2Witness:
    """Points x1 < 0 < x2 meeting the left bridging conditions for βⱼ."""

    index: int
    x1: Fraction
    x2: Fraction
    partner: int
    realizing: RadialDepartureWitness


@dataclass(frozen=True)
class ProvenanceInterval:
    start: Fraction
    end: Fraction
    tag: str

    def __str__(self) -> str:
        return f"{format_scalar(self.start)} {format_scalar(self.end)} {self.tag}"


@dataclass(frozen=True)
class BridgedFactor:
    """The bridged factor s̃ together with everything used to build it."""

    s_tilde: PointedPLMap
    base: PointedPLMap
    t1: PLMap
    t3: PLMap
    b1: dict[int, RadialDepartureWitness]
    sites_i: tuple[BridgeSiteI, ...]
    sites_ii: tuple[BridgeSiteII, ...]
    provenance: tuple[ProvenanceInterval, ...]
    report: Optional[BridgedReport] = field(default=None, compare=False)

    @property
    def b2(self) -> dict[int, BridgeSiteII]:
        return {site.index: site for site in self.sites_ii}


# ---------------------------------------------------------------------------
# Stay-right lift
# ---------------------------------------------------------------------------


def _solve_through(t: PLMap, lo: Fraction, hi: Fraction, f_piece: PLMap) -> PLMap:
    """Re-solve ``t∘ŝ = f`` on a piece using the branch of t over [lo, hi]."""
    try:
        return compose(inverse(restrict(t, lo, hi)), f_piece)
    except (DomainError, CompositionError) as exc:
        raise InvariantViolationError(
            "Branch of t cannot re-solve the piece",
            check="unique re-solve",
            witness=f"[{format_scalar(lo)}, {format_scalar(hi)}]",
            details={"cause": exc.message},
        ) from exc


def _max_new_value(lift: PLMap, s: PLMap, a: Fraction, b: Fraction) -> Optional[Fraction]:
    """max {ŝ(x) : ŝ(x) ≠ s(x)} over [a, b], or None when ŝ = s."""
    best = None
    for p, q in pairwise(crossings(lift, s, a, b)):
        mid = (p + q) / 2
        if evaluate(lift, mid) != evaluate(s, mid):
            top = max(evaluate(lift, p), evaluate(lift, q))
            best = top if best is None else max(best, top)
    return best


def _first_below(lift: PLMap, s: PLMap, a: Fraction, b: Fraction) -> Optional[Fraction]:
    for x in crossings(lift, s, a, b):
        if evaluate(lift, x) < evaluate(s, x):
            return x
    return None


def _case_one(
    t: PLMap, f_part: PLMap, s_part: PLMap, gamma: Fraction, level: Fraction
) -> tuple[PLMap, StayRightPlan]:
    a, b = s_part.domain
    cuts = sorted({a, b, *s_part.xs, *preimages(s_part, level)})
    pieces = []
    for p, q in pairwise(cuts):
        if evaluate(s_part, (p + q) / 2) > level:
            pieces.append(restrict(s_part, p, q))
        else:
            pieces.append(_solve_through(t, gamma, level, restrict(f_part, p, q)))
    return paste(pieces), StayRightPlan(level=level, gamma=gamma, case=StayRightCase.ONE)


def _case_two(
    t: PLMap,
    f_part: PLMap,
    s_part: PLMap,
    contour: list[Fraction],
    y_minus: Fraction,
    y_plus: Fraction,
    gamma: Fraction,
    level: Fraction,
) -> tuple[PLMap, StayRightPlan]:
    a, b = s_part.domain
    inner = [g for g in contour if y_plus < g < level]
    gamma0 = max((g for g in contour if g <= y_plus), default=ZERO)
    gammas = [gamma0, *inner, level]
    k = len(inner)

    deltas: list[Fraction] = [ZERO] * (k + 2)
    delta = first_hit(t, evaluate(t, level), 0, t.domain[0])
    if delta is None or delta < y_minus:
        raise InvariantViolationError(
            "No left point of t matches t(L(y-)) inside [y-, 0]", check="delta ladder"
        )
    deltas[k + 1] = delta
    for i in range(k, 0, -1):
        delta = first_hit(t, evaluate(t, gammas[i]), 0, deltas[i + 1])
        if delta is None or delta <= deltas[i + 1]:
            raise InvariantViolationError(
                "Delta ladder is not strictly nested",
                check="delta ladder",
                witness=format_scalar(gammas[i]),
            )
        deltas[i] = delta

    points = [a]
    for i in range(1, k + 2):
        x = first_hit(s_part, deltas[i], a, b)
        if x is None or x <= points[-1]:
            raise InvariantViolationError(
                "s does not cross the delta ladder in order",
                check="ladder crossings",
                witness=format_scalar(deltas[i]),
            )
        points.append(x)

    pieces = [
        _solve_through(t, gammas[i - 1], gammas[i], restrict(f_part, points[i - 1], points[i]))
        for i in range(1, k + 2)
    ]
    if points[-1] < b:
        pieces.append(_solve_through(t, gammas[k], level, restrict(f_part, points[-1], b)))
    plan = StayRightPlan(
        level=level,
        gamma=gamma,
        case=StayRightCase.TWO,
        gammas=tuple(gammas),
        deltas=tuple(deltas[1:]),
        crossings=tuple(points),
    )
    return paste(pieces), plan


def _verify_stay_right(
    t: PLMap,
    f_part: PLMap,
    s_part: PLMap,
    y_plus: Fraction,
    level: Fraction,
    lift: PLMap,
) -> None:
    a, b = s_part.domain
    if compose(t, lift) != f_part:
        check = oracle_factorization(t, lift, f_part)
        raise InvariantViolationError(
            "Stay-right lift does not factor f",
            check="(1) t∘ŝ = f",
            witness=None if check.holds else format_scalar(check.first_disagreement),
        )
    if evaluate(lift, a) != y_plus:
        raise InvariantViolationError("Stay-right lift moved its anchor", check="(2) ŝ(a) = y+")
    below = _first_below(lift, s_part, a, b)
    if below is not None:
        raise InvariantViolationError(
            "Stay-right lift drops below s", check="(3) ŝ >= s", witness=format_scalar(below)
        )
    top = _max_new_value(lift, s_part, a, b)
    if top != level:
        raise InvariantViolationError(
            "Largest modified value differs from L(y-)",
            check="(4) max new value",
            witness=None if top is None else format_scalar(top),
        )
    if evaluate(s_part, b) <= level:
        candidates = preimages(restrict(t, 0, level), evaluate(f_part, b))
        if not candidates or evaluate(lift, b) != candidates[-1]:
            raise InvariantViolationError(
                "End value is not the largest admissible preimage",
                check="(5) end value",
                witness=format_scalar(evaluate(lift, b)),
            )


def stay_right(
    t: PLMap,
    f: PLMap,
    s: PLMap,
    a: Scalar,
    b: Scalar,
    y_minus: Scalar,
    y_plus: Scalar,
) -> StayRightResult:
    """
    Build a nonnegative lift ŝ of f through t on the interval with ends a, b.

    Args:
        t: Factor map (a radial contour factor)
        f: Map with ``f = t∘s`` on the interval
        s: Current lift
        a: Anchor end, where ``s(a) = y_plus``
        b: Other end (may lie on either side of a)
        y_minus: Lower end of the liftable range
        y_plus: Upper end of the liftable range

    Returns:
        The lift and the plan it was built from (None when y_minus = 0)

    Raises:
        HypothesisError: Listing every unmet hypothesis
        InvariantViolationError: If a postcondition fails
    """
    a, b = as_fraction(a), as_fraction(b)
    y_minus, y_plus = as_fraction(y_minus), as_fraction(y_plus)
    if a == b:
        raise DomainError("Stay-right needs a nondegenerate interval", details={"a": format_scalar(a)})
    if b < a:
        mirrored = stay_right(
            t, reflect(restrict(f, b, a)), reflect(restrict(s, b, a)), -a, -b, y_minus, y_plus
        )
        plan = mirrored.plan
        if plan is not None:
            plan = replace(plan, crossings=tuple(-x for x in plan.crossings))
        return StayRightResult(reflect(mirrored.lift), plan)

    s_part, f_part = restrict(s, a, b), restrict(f, a, b)
    failed = []
    if not is_liftable_range(t, y_minus, y_plus):
        failed.append("[y-, y+] is a liftable range")
    if evaluate(s, a) != y_plus:
        failed.append("s(a) = y+")
    if image(s, a, b) != (y_minus, y_plus):
        failed.append("s(I) = [y-, y+]")
    if compose(t, s_part) != f_part:
        failed.append("f = t∘s on I")
    if failed:
        logger.warning("stay-right hypotheses failed", failed=failed)
        raise HypothesisError("Stay-right hypotheses not met", failed=failed)

    if y_minus == 0:
        return StayRightResult(PLMap(s_part.points, codomain=(0, 1)), None)

    level = reach(t, y_minus)
    contour = [record.point for record in one_sided_contour_points(t, Side.RIGHT)]
    gamma = max((g for g in contour if g < level), default=ZERO)
    if y_plus >= gamma:
        lift, plan = _case_one(t, f_part, s_part, gamma, level)
    else:
        lift, plan = _case_two(t, f_part, s_part, contour, y_minus, y_plus, gamma, level)
    _verify_stay_right(t, f_part, s_part, y_plus, level, lift)
    logger.debug(
        "stay-right lift built",
        case=str(plan.case),
        y_level=format_scalar(level),
        gamma=format_scalar(gamma),
    )
    return StayRightResult(PLMap(lift.points, codomain=(0, 1)), plan)


def stay_right_lift(
    t: PLMap,
    f: PLMap,
    s: PLMap,
    a: Scalar,
    b: Scalar,
    y_minus: Scalar,
    y_plus: Scalar,
) -> PLMap:
    """The lift ŝ from :func:`stay_right`, without its plan."""
    return stay_right(t, f, s, a, b, y_minus, y_plus).lift


# ---------------------------------------------------------------------------
# Bridging lemmas
# ---------------------------------------------------------------------------


def _alpha(records: tuple[DepartureRecord, ...], k: int) -> Fraction:
    return ZERO if k == 0 else records[k - 1].point


def _bridge_right(
    t: PLMap, f: PLMap, s: PLMap, i: int
) -> tuple[Fraction, Fraction, PLMap, Fraction]:
    """Bridge s around its i-th right contour point; returns (start, end, lift, L)."""
    records = one_sided_contour_points(s, Side.RIGHT)
    n = len(records)
    if not 1 <= i <= n or records[i - 1].orientation is not Orientation.NEGATIVE:
        raise HypothesisError(
            "Bridging needs a negative right contour point",
            failed=[f"alpha_{i} is a negative right contour point of s"],
        )
    _, right_end = s.domain
    y_minus = records[i - 1].value
    start = _alpha(records, i - 1)
    alpha_i = _alpha(records, i)
    if i == n:
        end = right_end
        lifted = stay_right_lift(t, f, s, start, end, y_minus, evaluate(s, start))
    else:
        alpha_next = _alpha(records, i + 1)
        left = stay_right_lift(t, f, s, start, alpha_i, y_minus, evaluate(s, start))
        right = stay_right_lift(t, f, s, alpha_next, alpha_i, y_minus, evaluate(s, alpha_next))
        if evaluate(left, alpha_i) != evaluate(right, alpha_i):
            raise InvariantViolationError(
                "Bridging halves disagree at the contour point",
                check="halves agree",
                witness=format_scalar(alpha_i),
            )
        pieces = [left, right]
        end = alpha_next
        if i == n - 1 and alpha_next < right_end:
            lo, _ = image(s, alpha_next, right_end)
            if lo >= 0:
                pieces.append(restrict(s, alpha_next, right_end))
            else:
                pieces.append(
                    stay_right_lift(t, f, s, alpha_next, right_end, lo, evaluate(s, alpha_next))
                )
            end = right_end
        lifted = paste(pieces)
    lifted = PLMap(lifted.points, codomain=(0, 1))
    level = reach(t, y_minus)
    _verify_site(t, f, s, records, i, start, end, lifted, level)
    return start, end, lifted, level


def _verify_site(
    t: PLMap,
    f: PLMap,
    s: PLMap,
    records: tuple[DepartureRecord, ...],
    i: int,
    start: Fraction,
    end: Fraction,
    lifted: PLMap,
    level: Fraction,
) -> None:
    n = len(records)
    if compose(t, lifted) != restrict(f, start, end):
        raise InvariantViolationError("Bridged lift does not factor f", check="(1) t∘ŝ = f")
    if evaluate(lifted, start) != evaluate(s, start):
        raise InvariantViolationError(
            "Bridged lift moved its start", check="(2) start value", witness=format_scalar(start)
        )
    if i < n and evaluate(lifted, _alpha(records, i + 1)) != evaluate(s, _alpha(records, i + 1)):
        raise InvariantViolationError(
            "Bridged lift moved the next contour point", check="(2) end value"
        )
    below = _first_below(lifted, s, start, end)
    if below is not None:
        raise InvariantViolationError(
            "Bridged lift drops below s", check="(3) ŝ >= s", witness=format_scalar(below)
        )
    top = _max_new_value(lifted, s, start, end)
    lo, hi = image(lifted, start, _alpha(records, i))
    if top != level or not lo <= level <= hi:
        raise InvariantViolationError(
            "Largest modified value is not L(s(alpha_i)) on [alpha_(i-1), alpha_i]",
            check="(4) max new value",
            witness=None if top is None else format_scalar(top),
        )


def bridging_I(t: PLMap, f: PLMap, s: PLMap, i: int) -> BridgeSiteI:  # noqa: N802
    """
    Bridge s around the negative right contour point αᵢ.

    The lift lives on [αᵢ₋₁, αᵢ₊₁], or on [αᵢ₋₁, 1] when αᵢ is the last
    negative right contour point.

    Raises:
        HypothesisError: If ``f != t∘s`` or αᵢ is not a negative right contour point
    """
    if compose(t, s) != f:
        raise HypothesisError("Bridging hypotheses not met", failed=["f = t∘s"])
    with LogContext(stage="bridging-I", index=i):
        start, end, lifted, level = _bridge_right(t, f, s, i)
        logger.debug("site bridged", start=format_scalar(start), end=format_scalar(end))
    return BridgeSiteI(index=i, start=start, end=end, lifted=lifted, level=level)


def bridging_II(t: PLMap, f: PLMap, s: PLMap, j: int, i_witness: int) -> BridgeSiteII:  # noqa: N802
    """
    Bridge s around the negative left contour point βⱼ.

    The partner index i must satisfy ``s(αᵢ) <= s(βⱼ)`` and
    ``s(αᵢ₋₁) <= s(βⱼ₋₁)``; the construction is the right-side one applied to
    ``s∘r`` and ``f∘r`` and reflected back.

    Raises:
        HypothesisError: Naming the failed inequality or hypothesis
    """
    right = one_sided_contour_points(s, Side.RIGHT)
    left = one_sided_contour_points(s, Side.LEFT)
    if not 1 <= i_witness <= len(right):
        raise HypothesisError(
            "Partner index out of range", failed=[f"1 <= i <= {len(right)}"]
        )
    if not 1 <= j <= len(left):
        raise HypothesisError(
            "Bridging needs a negative left contour point",
            failed=[f"beta_{j} is a negative left contour point of s"],
        )
    failed = []
    if not evaluate(s, _alpha(right, i_witness)) <= evaluate(s, _alpha(left, j)):
        failed.append("s(alpha_i) <= s(beta_j)")
    if not evaluate(s, _alpha(right, i_witness - 1)) <= evaluate(s, _alpha(left, j - 1)):
        failed.append("s(alpha_(i-1)) <= s(beta_(j-1))")
    if compose(t, s) != f:
        failed.append("f = t∘s")
    if failed:
        raise HypothesisError("Bridging hypotheses not met", failed=failed)
    with LogContext(stage="bridging-II", index=j):
        start, end, lifted, level = _bridge_right(t, reflect(f), reflect(s), j)
    return BridgeSiteII(
        index=j,
        partner=i_witness,
        start=-end,
        end=-start,
        lifted=reflect(lifted),
        level=level,
    )


# ---------------------------------------------------------------------------
# B1 and B2
# ---------------------------------------------------------------------------


def compute_B1(s: PLMap) -> dict[int, RadialDepartureWitness]:  # noqa: N802
    """
    Indices i such that αᵢ is a negative right contour point of s and
    ⟨x, αᵢ⟩ is a negative radial departure of s for some x < 0.

    Returns:
        Map from index to a verified witness ⟨x, αᵢ⟩
    """
    records = one_sided_contour_points(s, Side.RIGHT)
    outers = [
        segment.outer
        for segment in departure_segments(s, Side.LEFT)
        if segment.orientation is Orientation.POSITIVE
    ]
    found = {}
    for i, record in enumerate(records, start=1):
        if record.orientation is not Orientation.NEGATIVE:
            continue
        for x in outers:
            if pair_orientation(s, x, record.point) is Orientation.NEGATIVE:
                found[i] = RadialDepartureWitness(x, record.point, Orientation.NEGATIVE)
                break
    logger.debug("B1 computed", members=sorted(found))
    return found


def b2_conditions(
    s: PLMap,
    s_tilde: PLMap,
    t3: PLMap,
    lo: Fraction,
    hi: Fraction,
    x1: Fraction,
    x2: Fraction,
) -> Optional[RadialDepartureWitness]:
    """
    Check the left bridging conditions for one pair; return the realizing departure.

    (d) ``lo <= x1 < hi``; (b) x2 is a positive right departure of s̃;
    (c) ``s̃(x2) > max s on [x1, 0]``; (e) ``s(x1) < min s̃ on [0, x2]``;
    (a) a negative radial departure ⟨w1, w2⟩ of t3 with t3(w1) = x2 and
    t3(w2) = x1.
    """
    if not (lo <= x1 < hi and x1 < 0 < x2):
        return None
    if not any(
        segment.contains(x2) and segment.orientation is Orientation.POSITIVE
        for segment in departure_segments(s_tilde, Side.RIGHT)
    ):
        return None
    if not evaluate(s_tilde, x2) > image(s, x1, 0)[1]:
        return None
    if not evaluate(s, x1) < image(s_tilde, 0, x2)[0]:
        return None
    return realizing_departure(t3, x1, x2)


def _with_midpoints(points: set[Fraction], lo: Fraction, hi: Fraction) -> list[Fraction]:
    ordered = sorted({lo, hi, *points})
    return sorted({(p + q) / 2 for p, q in pairwise(ordered)})


def _x2_candidates(s_tilde: PLMap, t3: PLMap, refine: bool) -> list[Fraction]:
    """Interior midpoints first, then outer ends, breakpoints and t3 values."""
    t3_left_values = {y for x, y in t3.points if x < 0}
    primary: list[Fraction] = []
    secondary: list[Fraction] = []
    for segment in departure_segments(s_tilde, Side.RIGHT):
        if segment.orientation is not Orientation.POSITIVE:
            continue
        inside = {x for x in s_tilde.xs if segment.inner < x < segment.outer}
        inside.update(y for y in t3_left_values if segment.inner < y < segment.outer)
        if refine:
            for value in set(s_tilde.ys):
                inside.update(
                    x for x in preimages(s_tilde, value) if segment.inner < x < segment.outer
                )
        primary.extend({segment.outer, *inside})
        mids = _with_midpoints(inside, segment.inner, segment.outer)
        if refine:
            mids = _with_midpoints(set(mids) | inside, segment.inner, segment.outer)
        secondary.extend(mids)
    return sorted(set(secondary) - set(primary)) + sorted(set(primary))


def _x1_candidates(
    s: PLMap, s_tilde: PLMap, t3: PLMap, lo: Fraction, hi: Fraction, x2: Fraction, refine: bool
) -> list[Fraction]:
    a3, b3 = t3.domain
    inside: set[Fraction] = {x for x in s.xs if lo < x < hi}
    inside.update(y for x, y in t3.points if x > 0 and lo < y < hi)
    w1 = first_hit(t3, x2, 0, a3)
    if w1 is not None:
        inside.add(image(t3, w1, 0)[0])
    w2 = first_hit(t3, x2, 0, b3)
    if w2 is not None:
        inside.add(image(t3, 0, w2)[0])
    targets = {evaluate(s_tilde, x2), image(s_tilde, 0, x2)[0]}
    if refine:
        targets.update(s.ys)
    for value in targets:
        inside.update(preimages(restrict(s, lo, hi), value))
    inside = {x for x in inside if lo < x < hi}
    mids = _with_midpoints(inside, lo, hi)
    if refine:
        mids = _with_midpoints(set(mids) | inside, lo, hi)
    primary = [lo, *sorted(inside)]
    return primary + [x for x in mids if x not in inside]


def _b2_partner(
    s: PLMap, right: tuple[DepartureRecord, ...], left: tuple[DepartureRecord, ...], j: int
) -> int:
    """Smallest i with s(αᵢ) <= s(βⱼ) and s(αᵢ₋₁) <= s(βⱼ₋₁)."""
    s_beta = evaluate(s, _alpha(left, j))
    s_beta_prev = evaluate(s, _alpha(left, j - 1))
    for i in range(1, len(right) + 1):
        if (
            evaluate(s, _alpha(right, i)) <= s_beta
            and evaluate(s, _alpha(right, i - 1)) <= s_beta_prev
        ):
            return i
    raise InvariantViolationError(
        "No right contour point partners the left bridging site",
        check="B2 partner",
        witness=format_scalar(_alpha(left, j)),
    )


def compute_B2(  # noqa: N802
    s: PLMap, s_tilde: PLMap, t3: PLMap, *, refine: bool = False
) -> dict[int, B2Witness]:
    """
    Left bridging sites: indices j with βⱼ a negative left contour point of s
    for which some x1 < 0 < x2 satisfy the conditions of :func:`b2_conditions`.

    Args:
        s: The unbridged factor s1∘f2
        s_tilde: s with its right half already bridged
        t3: Radial contour factor of f3
        refine: Search a denser candidate set

    Returns:
        Map from index j to its verified witness pair and partner index
    """
    right = one_sided_contour_points(s, Side.RIGHT)
    left = one_sided_contour_points(s, Side.LEFT)
    x2_candidates = _x2_candidates(s_tilde, t3, refine)
    found = {}
    for j, record in enumerate(left, start=1):
        if record.orientation is not Orientation.NEGATIVE:
            continue
        lo, hi = record.point, _alpha(left, j - 1)
        witness = None
        for x2 in x2_candidates:
            for x1 in _x1_candidates(s, s_tilde, t3, lo, hi, x2, refine):
                realizing = b2_conditions(s, s_tilde, t3, lo, hi, x1, x2)
                if realizing is not None:
                    witness = (x1, x2, realizing)
                    break
            if witness is not None:
                break
        if witness is None:
            continue
        x1, x2, realizing = witness
        found[j] = B2Witness(j, x1, x2, _b2_partner(s, right, left, j), realizing)
    logger.debug("B2 computed", members=sorted(found), refine=refine)
    return found


# ---------------------------------------------------------------------------
# Bridged factor
# ---------------------------------------------------------------------------


def _paste_sites(
    s: PLMap, sites: list[tuple[Fraction, Fraction, PLMap, str]], lo: Fraction, hi: Fraction
) -> tuple[PLMap, list[ProvenanceInterval]]:
    pieces: list[PLMap] = []
    provenance: list[ProvenanceInterval] = []
    cursor = lo
    for start, end, lifted, tag in sorted(sites, key=lambda site: site[0]):
        if start > cursor:
            pieces.append(restrict(s, cursor, start))
            provenance.append(ProvenanceInterval(cursor, start, "original"))
        pieces.append(lifted)
        provenance.append(ProvenanceInterval(start, end, tag))
        cursor = end
    if cursor < hi:
        pieces.append(restrict(s, cursor, hi))
        provenance.append(ProvenanceInterval(cursor, hi, "original"))
    return paste(pieces), provenance


def _assemble(
    t1: PLMap, f: PLMap, s: PointedPLMap, t3: PLMap, refine: bool
) -> BridgedFactor:
    b1 = compute_B1(s)
    sites_i = tuple(bridging_I(t1, f, s, i) for i in sorted(b1))
    right_half, right_provenance = _paste_sites(
        s, [(site.start, site.end, site.lifted, f"bridged-I({site.index})") for site in sites_i],
        ZERO,
        ONE,
    )
    partial = PointedPLMap(paste([restrict(s, -1, 0), right_half]).points)

    b2 = compute_B2(s, partial, t3, refine=refine)
    sites_ii = tuple(
        replace(bridging_II(t1, f, s, j, w.partner), x1=w.x1, x2=w.x2)
        for j, w in sorted(b2.items())
    )
    left_half, left_provenance = _paste_sites(
        s,
        [(site.start, site.end, site.lifted, f"bridged-II({site.index})") for site in sites_ii],
        -ONE,
        ZERO,
    )
    s_tilde = PointedPLMap(paste([left_half, right_half]).points)
    return BridgedFactor(
        s_tilde=s_tilde,
        base=s,
        t1=t1,
        t3=t3,
        b1=b1,
        sites_i=sites_i,
        sites_ii=sites_ii,
        provenance=tuple(left_provenance + right_provenance),
    )


def _same_contour(f: PLMap, g: PLMap) -> bool:
    """t_f = t_g, false when either map has a constant side."""
    try:
        return radial_contour_factor(f) == radial_contour_factor(g)
    except DegenerateSideError:
        return False


def build_bridged_s(f1: PLMap, f2: PLMap, f3: PLMap) -> BridgedFactor:
    """
    Construct s̃ with ``t1∘s̃ = f1∘f2`` and no negative radial departures of ``s̃∘t3``.

    Args:
        f1: First pointed map
        f2: Second pointed map
        f3: Third pointed map

    Returns:
        The bridged factor, carrying a passing verification report

    Raises:
        HypothesisError: Naming the contour equalities that fail
        InvariantViolationError: If verification fails after one refined retry
    """
    f1, f2, f3 = (PointedPLMap.from_map(g) for g in (f1, f2, f3))
    f = compose(f1, f2)
    failed = []
    if not _same_contour(f1, f):
        failed.append("t_f1 = t_(f1∘f2)")
    if not _same_contour(f2, compose(f2, f3)):
        failed.append("t_f2 = t_(f2∘f3)")
    if failed:
        logger.warning("bridged factor hypotheses failed", failed=failed)
        raise HypothesisError("Bridged factor hypotheses not met", failed=failed)

    t1 = radial_contour_factor(f1)
    s = PointedPLMap.from_map(compose(meandering_lift(f1), f2))
    t3 = radial_contour_factor(f3)
    report = None
    for refine in (False, True):
        with LogContext(stage="bridge", refine=refine):
            factor = _assemble(t1, f, s, t3, refine)
            report = verify_bridged(factor, t1, f, t3)
        if report.passed:
            logger.info("bridged factor verified", b1=report.b1, b2=report.b2, refine=refine)
            return replace(factor, report=report)
        logger.warning(
            "bridged factor verification failed",
            failures=[check.name for check in report.failures()],
            refine=refine,
        )
    first = report.failures()[0]
    raise InvariantViolationError(
        "Bridged factor failed verification", check=first.name, witness=first.witness
    )


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def _sample_points(f: PLMap, g: PLMap, extra: list[Fraction]) -> list[Fraction]:
    a, b = f.domain
    cells = sorted({*crossings(f, g, a, b), *extra})
    return sorted({*cells, *((p + q) / 2 for p, q in pairwise(cells))})


def _locate(point: Fraction, bounds: list[tuple[Fraction, Fraction]], right: bool) -> bool:
    if right:
        return any(lo < point <= hi for lo, hi in bounds)
    return any(lo <= point < hi for lo, hi in bounds)


def _claim_checks(bf: BridgedFactor) -> list[CheckResult]:
    """Locations of the departures of s̃ relative to the contour points of s."""
    s, s_tilde = bf.base, bf.s_tilde
    right = one_sided_contour_points(s, Side.RIGHT)
    left = one_sided_contour_points(s, Side.LEFT)
    b1, b2 = set(bf.b1), set(bf.b2)
    bridged_right = [(_alpha(right, i - 1), _alpha(right, i)) for i in sorted(b1)]
    bridged_left = [(_alpha(left, j), _alpha(left, j - 1)) for j in sorted(b2)]
    plain_negative_right = [
        (_alpha(right, i - 1), _alpha(right, i))
        for i, record in enumerate(right, start=1)
        if record.orientation is Orientation.NEGATIVE and i not in b1
    ]
    plain_negative_left = [
        (_alpha(left, j), _alpha(left, j - 1))
        for j, record in enumerate(left, start=1)
        if record.orientation is Orientation.NEGATIVE and j not in b2
    ]
    base_segments = {side: departure_segments(s, side) for side in Side}
    contour_xs = [r.point for r in right] + [r.point for r in left]
    samples = _sample_points(s_tilde, s, contour_xs)

    def base_positive(x: Fraction, side: Side) -> bool:
        return any(
            seg.contains(x) and seg.orientation is Orientation.POSITIVE
            for seg in base_segments[side]
        )

    results = []
    for side, bridged, plain in (
        (Side.RIGHT, bridged_right, plain_negative_right),
        (Side.LEFT, bridged_left, plain_negative_left),
    ):
        is_right = side is Side.RIGHT
        positive_bad: Optional[Fraction] = None
        negative_bad: Optional[Fraction] = None
        for segment in departure_segments(s_tilde, side):
            if segment.orientation is Orientation.NEGATIVE:
                lo, hi = sorted((segment.inner, segment.outer))
                inside = any(p <= lo and hi <= q for p, q in plain)
                if not inside and negative_bad is None:
                    negative_bad = segment.outer
                continue
            for x in samples:
                if not segment.contains(x):
                    continue
                unchanged = evaluate(s_tilde, x) == evaluate(s, x) and base_positive(x, side)
                if not (unchanged or _locate(x, bridged, is_right)):
                    positive_bad = x
                    break
        prefix = "right" if is_right else "left"
        results.append(
            CheckResult(
                name=f"positive {prefix} departures",
                passed=positive_bad is None,
                witness=None if positive_bad is None else format_scalar(positive_bad),
            )
        )
        results.append(
            CheckResult(
                name=f"negative {prefix} departures",
                passed=negative_bad is None,
                witness=None if negative_bad is None else format_scalar(negative_bad),
            )
        )
    return results


def verify_bridged(bf: BridgedFactor, t1: PLMap, f1f2: PLMap, t3: PLMap) -> BridgedReport:
    """
    Independently re-check a bridged factor.

    Checks exact factorization, domination of s1∘f2, ``s̃(0) = 0``, absence of
    negative radial departures of ``s̃∘t3`` and the locations of the
    departures of s̃. Failures carry a witness.
    """
    s_tilde, base = bf.s_tilde, bf.base
    checks = []

    factorization = oracle_factorization(t1, s_tilde, f1f2)
    checks.append(
        CheckResult(
            name="factorization",
            passed=factorization.holds,
            witness=None
            if factorization.holds
            else format_scalar(factorization.first_disagreement),
        )
    )
    below = _first_below(s_tilde, base, *s_tilde.domain)
    checks.append(
        CheckResult(
            name="domination",
            passed=below is None,
            witness=None if below is None else format_scalar(below),
        )
    )
    checks.append(CheckResult(name="pointed", passed=evaluate(s_tilde, 0) == 0))
    witness = radial_departure_exists(compose(s_tilde, t3), Orientation.NEGATIVE)
    checks.append(
        CheckResult(
            name="no negative radial departure",
            passed=witness is None,
            witness=None if witness is None else str(witness),
        )
    )
    checks.extend(_claim_checks(bf))
    report = BridgedReport(
        passed=all(check.passed for check in checks),
        checks=checks,
        b1=sorted(bf.b1),
        b2=sorted(bf.b2),
    )
    logger.debug("bridged factor checked", passed=report.passed)
    return report
