"""
Tests for measure models and measure evaluation.
"""

import math

import pytest
from pydantic import ValidationError

from wbm.exceptions import DimensionMismatch, UnsupportedRepresentation
from wbm.models.bodies import Ball, Polytope, Segment
from wbm.models.measures import Gaussian, RadialExp, RadialPower, ball_volume, parse_measure, sphere_area
from wbm.models.results import EvalMethod
from wbm.services import geometry
from wbm.services.measures import concavity_class, gaussian_mass_check, measure, normal_cdf

PHI_1 = 0.8413447460685429
GAUSSIAN_UNIT_INTERVAL = 0.6826894921370859


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class TestMeasureModels:
    """Measure documents and closed-form helpers."""

    def test_parse_measure_document(self):
        mu = parse_measure('{"type": "radial_power", "p": 2}')
        assert isinstance(mu, RadialPower)
        assert mu.homogeneity_degree(2) == 4.0
        assert mu.polynomial_degree() == 2

    def test_odd_power_is_not_polynomial(self):
        assert RadialPower(p=1).polynomial_degree() is None

    def test_radial_exp_power_exponent_bounded(self):
        with pytest.raises(ValidationError):
            RadialExp(family="power", q=0.5)

    def test_radial_exp_log_family_accepted(self):
        mu = RadialExp(family="log", c=2.0)
        assert not mu.is_log_concave
        assert mu.label() == "radial_exp(log,c=2)"

    def test_sphere_and_ball_constants(self):
        assert sphere_area(2) == pytest.approx(2.0 * math.pi)
        assert ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)

    def test_gaussian_density_at_origin(self, sample_gaussian):
        assert sample_gaussian.density([[0.0, 0.0]])[0] == pytest.approx(1.0 / (2.0 * math.pi))

    def test_normal_cdf(self):
        assert normal_cdf(1.0) == pytest.approx(PHI_1, abs=1e-10)

    def test_total_mass_of_probability_measure(self, sample_gaussian):
        assert sample_gaussian.total_mass(2) == 1.0
        assert sample_gaussian.total_mass(5) == 1.0

    def test_non_integrable_densities_have_infinite_mass(self, sample_lebesgue, sample_radial_power):
        assert math.isinf(sample_lebesgue.total_mass(2))
        assert math.isinf(sample_radial_power.total_mass(2))
        assert math.isinf(RadialExp(family="log", c=2.0).total_mass(2))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_radial_exp_total_mass(self, n):
        # exp(-|x|^2) integrates to pi^(n/2)
        assert RadialExp(family="power", q=2.0).total_mass(n) == pytest.approx(math.pi ** (n / 2.0))
        assert RadialExp(family="gaussian").total_mass(n) == pytest.approx((2.0 * math.pi) ** (n / 2.0))

    def test_radial_exp_log_total_mass(self):
        # 2 pi * integral of r (1 + r)^-3 dr = 2 pi * B(2, 1)
        assert RadialExp(family="log", c=3.0).total_mass(2) == pytest.approx(math.pi)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


class TestClosedForms:
    """Paths that return exact values."""

    def test_gaussian_interval(self, sample_gaussian, sample_interval):
        result = measure(sample_gaussian, sample_interval)
        assert result.method == EvalMethod.EXACT
        assert result.value == pytest.approx(GAUSSIAN_UNIT_INTERVAL, abs=1e-12)

    def test_lebesgue_square(self, sample_lebesgue, sample_square):
        result = measure(sample_lebesgue, sample_square)
        assert result.method == EvalMethod.EXACT
        assert result.value == pytest.approx(4.0)

    def test_lebesgue_cube(self, sample_lebesgue, sample_cube):
        assert measure(sample_lebesgue, sample_cube).value == pytest.approx(8.0)

    def test_gaussian_axis_box(self, sample_gaussian, sample_square, sample_cube):
        assert measure(sample_gaussian, sample_square).value == pytest.approx(GAUSSIAN_UNIT_INTERVAL**2, abs=1e-12)
        assert measure(sample_gaussian, sample_cube).value == pytest.approx(GAUSSIAN_UNIT_INTERVAL**3, abs=1e-12)

    def test_gaussian_centered_disk(self, sample_gaussian, sample_disk):
        result = measure(sample_gaussian, sample_disk)
        assert result.method == EvalMethod.EXACT
        assert result.value == pytest.approx(1.0 - math.exp(-0.5), abs=1e-12)

    def test_radial_power_square(self, sample_radial_power, sample_square):
        result = measure(sample_radial_power, sample_square)
        assert result.method == EvalMethod.EXACT
        assert result.value == pytest.approx(8.0 / 3.0, abs=1e-12)

    def test_radial_power_disk(self, sample_radial_power, sample_disk):
        assert measure(sample_radial_power, sample_disk).value == pytest.approx(math.pi / 2.0, abs=1e-12)

    def test_lower_dimensional_body_has_zero_measure(self, sample_gaussian, sample_segment):
        result = measure(sample_gaussian, sample_segment)
        assert result.value == 0.0
        assert result.method == EvalMethod.EXACT

    def test_radial_power_scales_homogeneously(self, sample_radial_power, sample_triangle):
        base = measure(sample_radial_power, sample_triangle).value
        scaled = measure(sample_radial_power, geometry.scale(sample_triangle, 2.0)).value
        assert scaled == pytest.approx(16.0 * base, rel=1e-12)


class TestNumericPaths:
    """Quadrature and QMC estimates carry error bars."""

    def test_gaussian_triangle_quadrature_matches_qmc(self, sample_gaussian, sample_triangle):
        quad = measure(sample_gaussian, sample_triangle)
        qmc = measure(sample_gaussian, sample_triangle, method="qmc")
        assert quad.method == EvalMethod.QUADRATURE
        assert qmc.method == EvalMethod.QMC
        assert quad.agrees_with(qmc, rtol=1e-2)

    def test_offcenter_ball_3d(self, sample_gaussian):
        ball = Ball(center=(0.5, 0.0, 0.0), radius=1.0)
        result = measure(sample_gaussian, ball)
        assert 0.0 < result.value < 1.0
        assert result.abs_error < 1e-6

    def test_gaussian_mass_check(self):
        assert gaussian_mass_check(2).value == pytest.approx(1.0, abs=1e-2)

    def test_unknown_method_rejected(self, sample_gaussian, sample_square):
        with pytest.raises(ValueError):
            measure(sample_gaussian, sample_square, method="monte-carlo")

    def test_dimension_pinned_measure(self, sample_square):
        with pytest.raises(DimensionMismatch):
            measure(Gaussian(dim=3), sample_square)


# ---------------------------------------------------------------------------
# Concavity classes
# ---------------------------------------------------------------------------


class TestConcavityClass:
    """Which s-concavity applies to a measure on a class of bodies."""

    def test_lebesgue(self, sample_lebesgue, sample_triangle):
        assert concavity_class(sample_lebesgue, [sample_triangle]) == 0.5

    def test_gaussian_symmetric(self, sample_gaussian, sample_square, sample_disk):
        assert concavity_class(sample_gaussian, [sample_square, sample_disk]) == 0.5

    def test_gaussian_origin_containing(self, sample_gaussian, sample_triangle):
        assert concavity_class(sample_gaussian, [sample_triangle]) == 0.25

    def test_gaussian_general_is_log_concave(self, sample_gaussian, sample_triangle):
        moved = geometry.translate(sample_triangle, [2.0, 2.0])
        assert concavity_class(sample_gaussian, [moved]) == 0.0

    def test_radial_power_has_no_class(self, sample_radial_power, sample_triangle):
        with pytest.raises(UnsupportedRepresentation):
            concavity_class(sample_radial_power, [sample_triangle])

    def test_interval_class(self, sample_gaussian):
        bodies = [Segment(a=(-1.0,), b=(2.0,)), Polytope.box([-0.5], [0.5])]
        assert concavity_class(sample_gaussian, bodies) == 0.5
