"""
System Tests
============

Prefixes of inverse systems: composition schedules, the same-contour
chain, zig-zag certificates, rewiring and the coordinate map.
"""

from fractions import Fraction

import pytest

from plcontour.plmap import PLMap, PointedPLMap, compose
from plcontour.systems import (
    SystemPrefix,
    check_same_contour_chain,
    check_thread,
    check_zigzag_free,
    compose_schedule,
    composite,
    coordinate_map_h,
    drop_prefix,
    rewire,
)
from plcontour.utils.exceptions import DomainError, HypothesisError, ThreadError

W_THREAD = ("-1/2", 1, "1/2", "2/3", "1/3")


@pytest.fixture
def w_rewired(w_prefix):
    """Rewiring of five copies of W."""
    return rewire(w_prefix)


class TestPrefix:
    def test_bonding_is_one_based(self, w_prefix, w_map):
        assert w_prefix.bonding(1) == w_map
        with pytest.raises(DomainError):
            w_prefix.bonding(6)

    def test_domain_is_checked(self):
        with pytest.raises(DomainError):
            SystemPrefix((PLMap([(0, 0), (1, 1)]),))
        with pytest.raises(DomainError):
            SystemPrefix(())

    def test_composite(self, w_prefix, w_map):
        assert composite(w_prefix, 2, 4) == compose(w_map, w_map)

    def test_compose_schedule(self, w_prefix, w_map):
        composed = compose_schedule(w_prefix, [1, 3, 5])
        assert list(composed) == [compose(w_map, w_map)] * 2

    def test_schedule_must_start_at_one(self, w_prefix):
        with pytest.raises(DomainError):
            compose_schedule(w_prefix, [2, 4])

    def test_drop_prefix(self, w_prefix):
        assert len(drop_prefix(w_prefix, 3)) == 3
        with pytest.raises(DomainError):
            drop_prefix(w_prefix, 6)


class TestChain:
    def test_w_chain(self, w_prefix):
        assert check_same_contour_chain(w_prefix).passed

    def test_example_chain(self, ex4):
        assert check_same_contour_chain(SystemPrefix(ex4)).passed

    def test_broken_chain(self, identity, w_map):
        report = check_same_contour_chain(SystemPrefix((identity, w_map)))
        assert not report.passed
        assert report.first_failure == 1

    def test_constant_side(self, w_map):
        flat = PointedPLMap([(-1, 0), (0, 0), (1, 1)])
        report = check_same_contour_chain(SystemPrefix((flat, w_map)))
        assert not report.passed
        assert report.degenerate == 1


class TestZigzag:
    def test_negative_only_is_free(self, z_map):
        report = check_zigzag_free(SystemPrefix((z_map,)))
        assert report.certificate
        assert report.maps[0].orientations == "negative-only"

    def test_both_orientations(self, w_map, zz_map):
        report = check_zigzag_free(SystemPrefix((w_map, zz_map)))
        assert not report.certificate
        assert [m.orientations for m in report.maps] == ["positive-only", "both"]
        assert report.maps[1].negative_witness is not None

    def test_w_squared_and_identity(self, w_map, identity):
        report = check_zigzag_free(SystemPrefix((compose(w_map, w_map), identity)))
        assert [m.orientations for m in report.maps] == ["positive-only"] * 2


class TestRewire:
    def test_w_levels(self, w_rewired, w_map):
        assert w_rewired.passed
        assert list(w_rewired.rewired) == [compose(w_map, w_map)] * 2
        assert w_rewired.summary.trailing == []
        assert [c.index for c in w_rewired.summary.certificates] == [1, 3]

    def test_identity(self, identity):
        result = rewire(SystemPrefix((identity,) * 3))
        assert result.passed
        assert list(result.rewired) == [identity]
        assert result.summary.trailing == []

    def test_even_length_reports_last_level(self, w_map):
        result = rewire(SystemPrefix((w_map,) * 4))
        assert len(result.rewired) == 1
        assert result.summary.trailing == [4]

    def test_parallel_matches_serial(self, w_prefix, w_rewired):
        parallel = rewire(w_prefix, jobs=2)
        assert parallel.rewired == w_rewired.rewired
        assert parallel.summary == w_rewired.summary

    def test_too_short(self, w_map):
        with pytest.raises(HypothesisError):
            rewire(SystemPrefix((w_map, w_map)))

    def test_chain_required(self, identity, w_map):
        with pytest.raises(HypothesisError) as exc_info:
            rewire(SystemPrefix((identity, w_map, w_map)))
        assert exc_info.value.details["index"] == 1

    def test_rules(self, w_rewired):
        assert w_rewired.coordinate_map.rules() == [
            "h_1 = s~_1(x_3)",
            "h_2 = s~_3(x_5)",
        ]


class TestCoordinateMap:
    def test_zero_thread(self, w_rewired):
        assert coordinate_map_h(w_rewired, [0] * 5) == [0, 0]

    def test_w_thread(self, w_rewired):
        assert coordinate_map_h(w_rewired, W_THREAD) == [Fraction(1), Fraction(2, 3)]

    def test_not_a_thread(self, w_rewired):
        with pytest.raises(ThreadError) as exc_info:
            coordinate_map_h(w_rewired, ["1/2"] * 6)
        assert exc_info.value.level == 1

    def test_check_thread_returns_fractions(self, w_prefix):
        assert check_thread(w_prefix, W_THREAD)[1] == Fraction(1)
