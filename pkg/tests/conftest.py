"""
Pytest configuration and fixtures for the weighted Brunn-Minkowski toolkit tests.
"""

import numpy as np
import pytest

from wbm.config import settings
from wbm.logging_config import configure_logging
from wbm.models.bodies import Ball, Polytope, Segment, Zonotope
from wbm.models.convexfn import ConvexPL
from wbm.models.measures import Gaussian, Lebesgue, RadialPower


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    """Keep structlog output at warning level during the test session."""
    configure_logging("WARNING", "console")


@pytest.fixture
def rng():
    """Deterministic generator for tests that draw random instances."""
    return np.random.default_rng(settings.SEED)


# ---------------------------------------------------------------------------
# Bodies
# ---------------------------------------------------------------------------


@pytest.fixture
def sample_square():
    """[-1, 1]^2."""
    return Polytope.box([-1.0, -1.0], [1.0, 1.0], name="square")


@pytest.fixture
def sample_triangle():
    """Right triangle with a vertex at the origin."""
    return Polytope.from_points([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], name="triangle")


@pytest.fixture
def sample_disk():
    return Ball.unit(2, name="disk")


@pytest.fixture
def sample_segment():
    """[-e1, e1] in the plane."""
    return Segment.symmetric([1.0, 0.0], name="e1")


@pytest.fixture
def sample_zonotope():
    return Zonotope(center=(0.0, 0.0), generators=((1.0, 0.0), (0.0, 1.0), (1.0, 1.0)), name="hexagon")


@pytest.fixture
def sample_interval():
    """[-1, 1] on the line."""
    return Segment(a=(-1.0,), b=(1.0,), name="interval")


@pytest.fixture
def sample_cube():
    return Polytope.box([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0], name="cube")


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------


@pytest.fixture
def sample_lebesgue():
    return Lebesgue()


@pytest.fixture
def sample_gaussian():
    return Gaussian()


@pytest.fixture
def sample_radial_power():
    """Density |x|^2."""
    return RadialPower(p=2)


# ---------------------------------------------------------------------------
# Convex functions
# ---------------------------------------------------------------------------


@pytest.fixture
def sample_pl():
    """Nonnegative convex piecewise-linear function on [0, 1]."""
    return ConvexPL(breakpoints=(0.0, 0.5, 1.0), values=(1.0, 0.2, 0.7), nonnegative=True)
