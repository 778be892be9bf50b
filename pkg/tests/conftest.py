"""
Test Configuration
==================

Pytest fixtures shared by the plcontour tests.
"""

from pathlib import Path

import pytest
import structlog
from click.testing import CliRunner

from plcontour import fixtures
from plcontour.config import settings
from plcontour.systems import SystemPrefix


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop logging configuration made by CLI invocations."""
    yield
    structlog.reset_defaults()


@pytest.fixture
def data_dir() -> Path:
    """Directory of the bundled golden files."""
    return settings.resolved_fixture_dir


@pytest.fixture
def identity():
    """Identity map on [-1, 1]."""
    return fixtures.ID


@pytest.fixture
def w_map():
    """The W map: increasing on the left, one fold on the right."""
    return fixtures.W


@pytest.fixture
def m_map():
    """The M map: same radial contour factor as W."""
    return fixtures.M


@pytest.fixture
def z_map():
    """The Z map: only negative radial departures."""
    return fixtures.Z


@pytest.fixture
def zz_map():
    """The ZZ map: radial departures of both orientations."""
    return fixtures.ZZ


@pytest.fixture
def tent():
    """The full tent map."""
    return fixtures.TENT


@pytest.fixture
def ex4():
    """Three consecutive bonding maps with matching contour factors."""
    return fixtures.EX4


@pytest.fixture
def w_prefix(w_map):
    """Five copies of W."""
    return SystemPrefix((w_map,) * 5)


@pytest.fixture
def runner():
    """Click test runner."""
    return CliRunner()
