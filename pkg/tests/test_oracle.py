"""
Oracle Tests
============

The decision procedures agree with the brute-force oracles.
"""

from fractions import Fraction

import pytest
from hypothesis import given

from plcontour.contour import (
    contour_points,
    meandering_lift,
    radial_contour_factor,
    radial_departure_exists,
)
from plcontour.oracle import (
    GridSpec,
    oracle_contour_points,
    oracle_factorization,
    oracle_radial_departures,
)
from plcontour.plmap import Orientation, PointedPLMap
from plcontour.utils.exceptions import DegenerateSideError, DomainError

from . import strategies

GRIDS = [GridSpec(16), GridSpec(16).refine()]


def _orientations(f, grid):
    return {w.orientation for w in oracle_radial_departures(f, grid)}


class TestGridSpec:
    def test_refine_doubles(self):
        assert GridSpec(16).refine().resolution == 32

    def test_points_include_breakpoints(self, w_map):
        points = GridSpec(2).points(Fraction(0), Fraction(1), [w_map])
        assert Fraction(5, 6) in points
        assert Fraction(1, 2) in points

    def test_resolution_must_be_positive(self):
        with pytest.raises(DomainError):
            GridSpec(0)


@pytest.mark.parametrize("grid", GRIDS, ids=["d16", "d32"])
@pytest.mark.parametrize("name", ["w_map", "m_map", "z_map", "zz_map", "identity"])
def test_contour_points_agree_on_fixtures(request, name, grid):
    f = request.getfixturevalue(name)
    assert oracle_contour_points(f, grid) == contour_points(f)


@pytest.mark.parametrize("name", ["w_map", "m_map", "z_map", "zz_map", "identity"])
def test_radial_departures_agree_on_fixtures(request, name):
    f = request.getfixturevalue(name)
    found = _orientations(f, GRIDS[0])
    for orientation in Orientation:
        decided = radial_departure_exists(f, orientation) is not None
        assert decided == (orientation in found)


def test_z_oracle_finds_only_negative(z_map):
    assert _orientations(z_map, GRIDS[0]) == {Orientation.NEGATIVE}


class TestFactorization:
    def test_m_factors_through_w(self, w_map, m_map):
        assert oracle_factorization(w_map, meandering_lift(m_map), m_map)

    def test_disagreement_is_reported(self, w_map, m_map, identity):
        check = oracle_factorization(w_map, identity, m_map)
        assert not check
        assert check.first_disagreement is not None

    def test_identity_factor(self, identity, z_map):
        assert oracle_factorization(identity, z_map, z_map)


@pytest.mark.parametrize("grid", GRIDS, ids=["d16", "d32"])
@given(f=strategies.pointed_maps())
@strategies.ACCEPTANCE
def test_contour_points_agree_on_random_maps(grid, f):
    assert oracle_contour_points(f, grid) == contour_points(f)


@pytest.mark.parametrize("grid", GRIDS, ids=["d16", "d32"])
@given(f=strategies.pointed_maps())
@strategies.ACCEPTANCE
def test_radial_departures_agree_on_random_maps(grid, f):
    found = _orientations(f, grid)
    for orientation in Orientation:
        assert (radial_departure_exists(f, orientation) is not None) == (orientation in found)


@given(strategies.pointed_maps())
@strategies.ACCEPTANCE
def test_factorization_oracle_accepts_lift(f):
    assert oracle_factorization(radial_contour_factor(f), meandering_lift(f), f)


def test_flat_map_is_rejected():
    flat = PointedPLMap([(-1, 0), (0, 0), (1, 1)])
    with pytest.raises(DegenerateSideError):
        oracle_contour_points(flat, GRIDS[0])
