"""
Contour Factorization Tests
===========================

Departures, contour points, contour factors, meandering lifts, the reach
function and radial departure decisions.
"""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from plcontour.contour import (
    L,
    RadialDepartureWitness,
    contour_factor,
    contour_points,
    departure_orientation,
    departures,
    is_liftable_range,
    lift_through,
    liftable_from_departure,
    meandering_lift,
    radial_contour_factor,
    radial_departure_exists,
    radial_departure_through,
    radial_departures,
    reach,
    side_view,
)
from plcontour.fixtures import ID, W
from plcontour.plmap import Orientation, PLMap, PointedPLMap, Side, compose
from plcontour.utils.exceptions import (
    DegenerateSideError,
    DomainError,
    HypothesisError,
    InvariantViolationError,
    NotLiftableError,
)

from . import strategies

HALF = Fraction(1, 2)


class TestDepartures:
    def test_w_right_side(self, w_map):
        segments = departures(w_map, Side.RIGHT)
        assert [(s.inner, s.outer, s.orientation) for s in segments] == [
            (0, HALF, Orientation.POSITIVE),
            (Fraction(5, 6), 1, Orientation.NEGATIVE),
        ]

    def test_z_right_side(self, z_map):
        segments = departures(z_map, Side.RIGHT)
        assert [(s.inner, s.outer, s.orientation) for s in segments] == [
            (0, Fraction(1, 4), Orientation.NEGATIVE),
            (HALF, 1, Orientation.POSITIVE),
        ]

    def test_constant_side_is_degenerate(self):
        flat = PointedPLMap([(-1, 0), (0, 0), (1, 1)])
        with pytest.raises(DegenerateSideError):
            departures(flat, Side.LEFT)

    def test_orientation_of_a_point(self, w_map):
        assert departure_orientation(w_map, "1/4") is Orientation.POSITIVE
        assert departure_orientation(w_map, "3/4") is None
        assert departure_orientation(w_map, "-1/2") is Orientation.NEGATIVE


class TestContourPoints:
    def test_m_right_contour(self, m_map):
        right = contour_points(m_map).right
        assert [(r.point, r.value) for r in right] == [(HALF, 1), (1, -HALF)]
        assert [r.orientation for r in right] == [Orientation.POSITIVE, Orientation.NEGATIVE]

    def test_w_left_contour(self, w_map):
        left = contour_points(w_map).left
        assert [(r.point, r.value) for r in left] == [(-1, -1)]

    def test_sentinel_index(self, w_map):
        data = contour_points(w_map)
        assert data.alpha(0) == 0
        assert data.alpha(2) == 1
        assert data.beta(1) == -1


class TestContourFactor:
    def test_m_has_factor_w(self, m_map, w_map):
        assert radial_contour_factor(m_map) == w_map

    def test_w_squared_has_factor_w(self, w_map):
        assert radial_contour_factor(compose(w_map, w_map)) == w_map

    def test_z_factor(self, z_map):
        expected = PointedPLMap([(-1, 1), (0, 0), ("1/2", "-1/2"), (1, 1)])
        assert radial_contour_factor(z_map) == expected

    def test_identity_is_its_own_factor(self, identity):
        assert radial_contour_factor(identity) == identity

    def test_one_sided_factors_of_w(self, w_map):
        assert contour_factor(w_map) == PLMap([(0, 0), ("1/2", 1), (1, "-1/2")])
        assert contour_factor(w_map, Side.LEFT) == PLMap([(0, 0), (1, -1)])

    def test_m_shares_one_sided_factor_with_w(self, m_map, w_map):
        assert contour_factor(m_map) == contour_factor(w_map)

    @given(strategies.pointed_maps())
    @strategies.PROPERTIES
    def test_radial_factor_is_made_of_one_sided_factors(self, f):
        t = radial_contour_factor(f)
        for side in Side:
            assert contour_factor(f, side) == side_view(t, side)


class TestMeanderingLift:
    def test_w_lifts_to_identity(self, w_map, identity):
        assert meandering_lift(w_map) == identity

    def test_m_lift(self, m_map):
        expected = PointedPLMap(
            [(-1, -1), (0, 0), ("1/4", "1/4"), ("3/8", "1/8"), ("1/2", "1/2"), (1, 1)]
        )
        assert meandering_lift(m_map) == expected

    def test_z_lift(self, z_map):
        expected = PointedPLMap(
            [(-1, -1), ("-1/2", "-1/4"), (0, 0), ("1/4", "1/2"), (1, 1)]
        )
        assert meandering_lift(z_map) == expected

    @given(strategies.pointed_maps())
    @strategies.ACCEPTANCE
    def test_lift_factors_the_map(self, f):
        t, s = radial_contour_factor(f), meandering_lift(f)
        assert compose(t, s) == f

    @given(strategies.pointed_maps())
    @strategies.ACCEPTANCE
    def test_lift_preserves_sides(self, f):
        s = meandering_lift(f)
        assert all(x * y >= 0 for x, y in s.points)

    @given(strategies.pointed_maps())
    @strategies.ACCEPTANCE
    def test_contour_factor_is_idempotent(self, f):
        t = radial_contour_factor(f)
        assert radial_contour_factor(t) == t


class TestLiftThrough:
    def test_w_through_itself(self, w_map, identity):
        assert lift_through(w_map, w_map, pick=max) == identity
        assert lift_through(w_map, w_map) == PLMap(
            [(-1, -1), ("1/2", "1/2"), ("5/6", 0), (1, "-1/2")]
        )

    def test_image_not_covered(self, identity):
        t = PointedPLMap([(-1, "-1/2"), (0, 0), (1, "1/2")])
        with pytest.raises(InvariantViolationError):
            lift_through(identity, t)

    @given(strategies.sign_changing_lifts())
    @strategies.PROPERTIES
    def test_random_choices_factor_the_map(self, pair):
        f, s = pair
        assert s(0) == 0
        assert compose(radial_contour_factor(f), s) == f


class TestRadialDepartures:
    def test_z_negative_witness(self, z_map):
        witness = radial_departure_exists(z_map, Orientation.NEGATIVE)
        assert (witness.x1, witness.x2) == (-1, Fraction(1, 4))

    def test_z_has_no_positive(self, z_map):
        assert radial_departure_exists(z_map, Orientation.POSITIVE) is None

    def test_w_has_no_negative(self, w_map):
        assert radial_departure_exists(w_map, Orientation.NEGATIVE) is None
        assert radial_departure_exists(w_map, Orientation.POSITIVE) is not None

    def test_zz_has_both(self, zz_map):
        for orientation in Orientation:
            assert radial_departure_exists(zz_map, orientation) is not None

    def test_specific_pairs(self, z_map, w_map):
        assert radial_departure_through(z_map, "-1/2", "1/4") is Orientation.NEGATIVE
        assert radial_departure_through(w_map, "-1/4", "1/2") is Orientation.POSITIVE
        assert radial_departure_through(w_map, "-1/4", "3/4") is None

    def test_pair_must_straddle_zero(self, w_map):
        with pytest.raises(DomainError):
            radial_departure_through(w_map, "1/4", "1/2")


def _composed_orientation(f, g, x1, x2):
    """Orientation of f∘g on ⟨x1, x2⟩ read off g and the pushed-forward pair for f."""
    inner = radial_departure_through(g, x1, x2)
    if inner is None:
        return None
    y1, y2 = g(x1), g(x2)
    if inner is Orientation.POSITIVE:
        return radial_departure_through(f, y1, y2)
    outer = radial_departure_through(f, y2, y1)
    return None if outer is None else outer.flip()


def _by_orientation(witnesses, orientation):
    return [w for w in witnesses if w.orientation is orientation]


class TestRadialDepartureStructure:
    def test_zz_witnesses(self, zz_map):
        positive, negative = radial_departures(zz_map)
        assert (positive.x1, positive.x2) == (Fraction(-1, 4), Fraction(1, 4))
        assert (negative.x1, negative.x2) == (-1, 1)
        assert negative.nests_strictly(positive)

    @given(
        st.one_of(
            strategies.pointed_maps(),
            strategies.sign_changing_lifts().map(lambda pair: pair[1]),
        )
    )
    @strategies.PROPERTIES
    def test_opposite_witnesses_nest_with_their_values(self, f):
        witnesses = radial_departures(f)
        for w in witnesses:
            assert radial_departure_through(f, w.x1, w.x2) is w.orientation
        for p in _by_orientation(witnesses, Orientation.POSITIVE):
            for n in _by_orientation(witnesses, Orientation.NEGATIVE):
                assert p.nests_strictly(n)
                outer, inner = (p, n) if p.x1 < n.x1 else (n, p)
                low, high = sorted((f(outer.x1), f(outer.x2)))
                inner_low, inner_high = sorted((f(inner.x1), f(inner.x2)))
                assert low < inner_low < 0 < inner_high < high

    @given(
        strategies.pointed_maps(max_breakpoints=8),
        strategies.pointed_maps(max_breakpoints=8),
        strategies.unit_fractions(-1, 0),
        strategies.unit_fractions(0, 1),
    )
    @strategies.PROPERTIES
    def test_composition_rule(self, f, g, x1, x2):
        assume(x1 < 0 < x2)
        fg = compose(f, g)
        pairs = {(w.x1, w.x2) for w in (*radial_departures(fg), *radial_departures(g))}
        pairs.add((x1, x2))
        for a, b in pairs:
            assert radial_departure_through(fg, a, b) is _composed_orientation(f, g, a, b)

    @given(strategies.sign_changing_lifts())
    @strategies.PROPERTIES
    def test_witnesses_match_through_every_lift(self, pair):
        f, s = pair
        t, minimal = radial_contour_factor(f), meandering_lift(f)
        for w in radial_departures(f):
            for lift in (minimal, s):
                assert radial_departure_through(lift, w.x1, w.x2) is Orientation.POSITIVE
                assert radial_departure_through(t, lift(w.x1), lift(w.x2)) is w.orientation
            assert (s(w.x1), s(w.x2)) == (minimal(w.x1), minimal(w.x2))

    @given(strategies.same_contour_pairs())
    @strategies.PROPERTIES
    def test_negative_departures_straddle_outer_witnesses(self, pair):
        f1, f2 = pair
        assert radial_contour_factor(f1) == radial_contour_factor(compose(f1, f2))
        outer = radial_departures(f1)
        for w in _by_orientation(radial_departures(f2), Orientation.NEGATIVE):
            pushed = RadialDepartureWitness(f2(w.x2), f2(w.x1), w.orientation)
            assert radial_departure_through(f1, pushed.x1, pushed.x2) is None
            for y in outer:
                assert y.nests_strictly(pushed)

    @given(strategies.same_contour_pairs(), strategies.pointed_maps(max_breakpoints=8))
    @strategies.PROPERTIES
    def test_lifted_composite_straddles_realized_pairs(self, pair, f1):
        f2, f3 = pair
        t3 = radial_contour_factor(f3)
        try:
            same = radial_contour_factor(compose(f2, t3)) == radial_contour_factor(f2)
        except DegenerateSideError:
            same = False
        assume(same)
        realized = [
            RadialDepartureWitness(t3(w.x2), t3(w.x1), w.orientation)
            for w in _by_orientation(radial_departures(t3), Orientation.NEGATIVE)
        ]
        composite = compose(meandering_lift(f1), f2)
        for z in radial_departures(composite):
            for x in realized:
                assert z.nests_strictly(x)


class TestReach:
    def test_values(self):
        assert reach(W, "-1/2") == 1
        assert L(W, "-1/4") == Fraction(11, 12)

    def test_requires_negative_point(self):
        with pytest.raises(DomainError):
            reach(W, 0)

    def test_not_liftable(self):
        t = PointedPLMap([(-1, 1), (0, 0), (1, "1/2")])
        with pytest.raises(NotLiftableError):
            reach(t, -1)

    @given(strategies.pointed_maps(), strategies.unit_fractions(-1, 0))
    @strategies.PROPERTIES
    def test_monotone(self, t, y):
        values = {}
        for point in {y, *t.xs}:
            if point < 0:
                try:
                    values[point] = reach(t, point)
                except (DomainError, NotLiftableError):
                    continue
        ordered = sorted(values)
        for k, lower in enumerate(ordered):
            for upper in ordered[k:]:
                assert values[upper] <= values[lower]


class TestLiftableRange:
    def test_w_ranges(self):
        assert is_liftable_range(W, "-1/4", "1/2")
        assert not is_liftable_range(W, "-1/4", "1/4")

    def test_nonnegative_range_of_identity(self):
        assert is_liftable_range(ID, 0, 1)

    def test_bounds_checked(self):
        with pytest.raises(DomainError):
            is_liftable_range(W, "1/4", "1/2")

    def test_left_image_must_be_covered(self):
        t = PointedPLMap([(-1, 1), (0, 0), (1, "1/2")])
        assert not is_liftable_range(t, -1, "1/2")


@given(
    strategies.pointed_maps(),
    strategies.unit_fractions(-1, 0),
    strategies.unit_fractions(0, 1),
    strategies.unit_fractions(0, 1),
    strategies.unit_fractions(0, 1),
)
@settings(max_examples=60, deadline=None)
def test_liftable_ranges_widen_outward(f, y_minus, y_plus, shrink, grow):
    t = radial_contour_factor(f)
    assume(y_minus < 0 and is_liftable_range(t, y_minus, y_plus))
    w_minus = y_minus * (1 - shrink)
    w_plus = y_plus + (1 - y_plus) * grow
    assume(w_minus < 0)
    assert is_liftable_range(t, w_minus, w_plus)


class TestLiftableFromDeparture:
    def test_nonnegative_interval(self, w_map, identity):
        assert liftable_from_departure(w_map, identity, 0, 1)

    def test_hypotheses_are_listed(self, w_map, z_map):
        with pytest.raises(HypothesisError) as exc_info:
            liftable_from_departure(w_map, z_map, 0, 1)
        assert "s([x, x']) = [y-, y+] with y+ = s(x)" in exc_info.value.failed

    def test_interval_order(self, w_map, identity):
        with pytest.raises(DomainError):
            liftable_from_departure(w_map, identity, "1/2", "1/4")
