"""
Tests for mixed measures: the Richardson engine, finite-difference oracles,
representation formulas, the disk flux check and homogeneity identities.
"""

import math

import numpy as np
import pytest

from wbm.exceptions import DimensionMismatch, Inconclusive, UnsupportedConfiguration, UnsupportedRepresentation
from wbm.models.bodies import Polytope, Segment
from wbm.models.measures import Gaussian, Lebesgue, RadialPower
from wbm.models.results import EvalMethod, EvalResult
from wbm.models.schedule import FDSchedule
from wbm.monitoring.verdicts import Verdict
from wbm.services.mixed import (
    FDEngine,
    disk_normal_flux,
    homogeneity_suite,
    mixed1,
    mixed1_fd,
    mixed1_formula,
    mixed2,
    mixed2_fd,
    mixed2_formula,
    mixed2_segment,
    surface_area_fd,
)

GAUSSIAN_DENSITY_AT_1 = math.exp(-0.5) / math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# Schedules and the Richardson engine
# ---------------------------------------------------------------------------


class TestFDSchedule:
    """Validation of step grids."""

    def test_default_schedule(self):
        schedule = FDSchedule.default()
        assert schedule.epsilons[0] == 0.2
        assert len(schedule.epsilons) == 7
        assert schedule.ratio == pytest.approx(2.0)

    def test_non_geometric_grid_rejected(self):
        with pytest.raises(ValueError):
            FDSchedule(epsilons=(0.4, 0.2, 0.05))

    def test_increasing_grid_rejected(self):
        with pytest.raises(ValueError):
            FDSchedule(epsilons=(0.1, 0.2, 0.4))


class TestFDEngine:
    """Extrapolation of synthetic quotient sequences."""

    def test_linear_error_is_removed(self):
        schedule = FDSchedule.default()
        quotients = [EvalResult.exact(3.0 + 2.0 * eps) for eps in schedule.epsilons]
        estimate = FDEngine(schedule).extrapolate(quotients, [1e-12] * len(quotients))
        assert estimate.result.method == EvalMethod.FD_EXTRAPOLATED
        assert estimate.result.value == pytest.approx(3.0, abs=1e-10)

    def test_quadratic_error_is_removed(self):
        schedule = FDSchedule.default()
        quotients = [EvalResult.exact(1.0 - eps + 5.0 * eps**2) for eps in schedule.epsilons]
        estimate = FDEngine(schedule).extrapolate(quotients, [1e-12] * len(quotients))
        assert estimate.result.value == pytest.approx(1.0, abs=1e-10)

    def test_diverging_sequence_is_inconclusive(self):
        schedule = FDSchedule.default()
        quotients = [EvalResult.exact((-2.0) ** k) for k in range(len(schedule.epsilons))]
        with pytest.raises(Inconclusive):
            FDEngine(schedule).extrapolate(quotients, [0.0] * len(quotients))

    def test_single_level_window(self):
        schedule = FDSchedule.default(extrapolation=1)
        quotients = [EvalResult.exact(2.0 + eps) for eps in schedule.epsilons]
        estimate = FDEngine(schedule).extrapolate(quotients, [0.0] * len(quotients))
        assert estimate.result.value == pytest.approx(2.0 + schedule.epsilons[-1])


# ---------------------------------------------------------------------------
# First mixed measures
# ---------------------------------------------------------------------------


class TestMixed1:
    """mu(K;L) by formula and by finite differences."""

    def test_lebesgue_self_mixed_is_twice_area(self, sample_lebesgue, sample_square):
        assert mixed1_formula(sample_lebesgue, sample_square, sample_square).value == pytest.approx(8.0)

    def test_lebesgue_square_disk_is_perimeter(self, sample_lebesgue, sample_square, sample_disk):
        formula = mixed1_formula(sample_lebesgue, sample_square, sample_disk)
        fd = mixed1_fd(sample_lebesgue, sample_square, sample_disk)
        assert formula.value == pytest.approx(8.0)
        assert fd.method == EvalMethod.FD_EXTRAPOLATED
        assert fd.value == pytest.approx(8.0, abs=1e-6)

    def test_gaussian_formula_matches_fd(self, sample_gaussian, sample_square, sample_triangle):
        formula = mixed1_formula(sample_gaussian, sample_square, sample_triangle)
        fd = mixed1_fd(sample_gaussian, sample_square, sample_triangle)
        assert formula.agrees_with(fd, rtol=1e-3)

    def test_radial_power_surface_golden(self, sample_radial_power, sample_square):
        formula = mixed1(sample_radial_power, sample_square, Polytope.box([-1, -1], [1, 1]))
        assert formula.value == pytest.approx(4.0 * 8.0 / 3.0, abs=1e-12)
        fd = surface_area_fd(sample_radial_power, sample_square)
        assert abs(fd.value - 32.0 / 3.0) <= 3.0 * fd.abs_error + 1e-9

    def test_formula_path_unavailable_in_four_dimensions(self, sample_gaussian):
        box = Polytope.box([-1.0] * 4, [1.0] * 4)
        with pytest.raises(UnsupportedRepresentation):
            mixed1(sample_gaussian, box, box, path="formula")

    def test_dimension_mismatch(self, sample_gaussian, sample_square, sample_interval):
        with pytest.raises(DimensionMismatch):
            mixed1_formula(sample_gaussian, sample_square, sample_interval)


# ---------------------------------------------------------------------------
# Second mixed measures
# ---------------------------------------------------------------------------


class TestMixed2:
    """mu(A;B,C) by formula and by finite differences."""

    def test_lebesgue_is_mixed_area(self, sample_lebesgue, sample_square, sample_triangle, sample_disk):
        # 2 V(square, triangle) = |square + triangle| - |square| - |triangle| = 4
        for A in (sample_triangle, sample_disk):
            result = mixed2_formula(sample_lebesgue, A, sample_square, sample_triangle)
            assert result.value == pytest.approx(4.0, abs=1e-12)

    def test_gaussian_interval_closed_form(self, sample_gaussian, sample_interval):
        result = mixed2_formula(sample_gaussian, sample_interval, sample_interval, sample_interval)
        assert result.method == EvalMethod.EXACT
        assert result.value == pytest.approx(-2.0 * GAUSSIAN_DENSITY_AT_1, abs=1e-14)

    def test_gaussian_interval_fd(self, sample_gaussian, sample_interval):
        result = mixed2_fd(sample_gaussian, sample_interval, sample_interval, sample_interval)
        assert result.value == pytest.approx(-2.0 * GAUSSIAN_DENSITY_AT_1, abs=1e-6)

    def test_planar_formula_matches_fd(self, sample_gaussian, sample_square, sample_triangle, sample_zonotope):
        formula = mixed2_formula(sample_gaussian, sample_square, sample_triangle, sample_zonotope)
        fd = mixed2_fd(sample_gaussian, sample_square, sample_triangle, sample_zonotope)
        assert formula.agrees_with(fd, rtol=1e-3)

    def test_formula_is_symmetric_in_last_arguments(
        self, sample_gaussian, sample_square, sample_triangle, sample_zonotope
    ):
        bc = mixed2_formula(sample_gaussian, sample_square, sample_triangle, sample_zonotope)
        cb = mixed2_formula(sample_gaussian, sample_square, sample_zonotope, sample_triangle)
        assert bc.agrees_with(cb, rtol=1e-9)

    def test_segment_representation_in_three_dimensions(self, sample_lebesgue, sample_cube):
        # Lebesgue: mu(A;[0,v],C) is the mixed volume term 2 * 3 V(A, [0,v], C) / 3
        v = [0.0, 0.0, 1.0]
        result = mixed2_segment(sample_lebesgue, sample_cube, v, sample_cube)
        fd = mixed2_fd(sample_lebesgue, sample_cube, Segment.from_origin(v), sample_cube)
        assert result.agrees_with(fd, rtol=1e-6)

    def test_segment_representation_with_polynomial_density(self, sample_radial_power, sample_cube):
        # |x|^2 keeps every measure on the finite-difference path exact
        v = [0.6, 0.3, 0.8]
        C = Polytope.box([-0.5, -0.5, -0.5], [0.5, 0.5, 0.5], name="half_cube")
        result = mixed2_segment(sample_radial_power, sample_cube, v, C)
        fd = mixed2_fd(sample_radial_power, sample_cube, Segment.from_origin(v), C)
        assert result.agrees_with(fd, rtol=1e-5)

    def test_segment_representation_with_gaussian_density(self, sample_gaussian, sample_cube):
        v = [0.6, 0.3, 0.8]
        C = Polytope.box([-0.5, -0.5, -0.5], [0.5, 0.5, 0.5], name="half_cube")
        result = mixed2_formula(sample_gaussian, sample_cube, Segment.from_origin(v), C)
        fd = mixed2_fd(sample_gaussian, sample_cube, Segment.from_origin(v), C)
        assert result.agrees_with(fd, rtol=1e-3)

    def test_auto_path_prefers_formula(self, sample_radial_power, sample_square, sample_triangle):
        result = mixed2(sample_radial_power, sample_square, sample_triangle, sample_square)
        assert result.method == EvalMethod.EXACT


# ---------------------------------------------------------------------------
# Disk flux and homogeneity
# ---------------------------------------------------------------------------


class TestDiskNormalFlux:
    """Integral of <grad phi, v> over a disk normal to v."""

    def test_constant_density_has_no_flux(self, sample_lebesgue):
        result = disk_normal_flux(sample_lebesgue, [1.0, 0.0], 1.0, [0.5, 0.0])
        assert result.value == 0.0
        assert result.method == EvalMethod.EXACT

    def test_gaussian_planar_flux(self, sample_gaussian):
        result = disk_normal_flux(sample_gaussian, [1.0, 0.0], 1.0, [1.0, 0.0])
        expected = -GAUSSIAN_DENSITY_AT_1 * 0.6826894921370859
        assert result.value == pytest.approx(expected, abs=1e-10)

    def test_gaussian_flux_vanishes_through_origin(self, sample_gaussian):
        result = disk_normal_flux(sample_gaussian, [0.0, 0.0, 1.0], 0.7, [0.0, 0.0, 0.0])
        assert result.value == pytest.approx(0.0, abs=1e-12)

    def test_line_flux(self, sample_gaussian):
        result = disk_normal_flux(sample_gaussian, [1.0], 1.0, [1.0])
        assert result.value == pytest.approx(-GAUSSIAN_DENSITY_AT_1, abs=1e-14)


class TestHomogeneitySuite:
    """Identities for alpha-homogeneous measures."""

    def test_radial_power_identities_hold(self, sample_radial_power, sample_square, sample_triangle, sample_zonotope):
        reports = homogeneity_suite(sample_radial_power, sample_square, sample_triangle, sample_zonotope)
        assert {r.name for r in reports} >= {"homogeneity_mixed1", "self_mixed2", "dilation_integral"}
        for report in reports:
            report.rtol = 1e-9
            assert report.verdict == Verdict.HOLDS, report.to_dict()

    def test_lebesgue_identities_hold(self, sample_lebesgue, sample_square, sample_triangle, sample_zonotope):
        for report in homogeneity_suite(sample_lebesgue, sample_triangle, sample_square, sample_zonotope):
            report.rtol = 1e-9
            assert report.verdict == Verdict.HOLDS, report.to_dict()

    def test_gaussian_is_not_homogeneous(self, sample_square):
        with pytest.raises(UnsupportedConfiguration):
            homogeneity_suite(Gaussian(), sample_square, sample_square, sample_square)

    def test_self_mixed_first_is_alpha_times_measure(self, sample_radial_power, sample_triangle):
        from wbm.services.measures import measure

        m = mixed1_formula(sample_radial_power, sample_triangle, sample_triangle)
        assert m.value == pytest.approx(4.0 * measure(sample_radial_power, sample_triangle).value, rel=1e-12)


def test_lebesgue_and_radial_power_zero_agree(sample_square, sample_triangle):
    """RadialPower(p=0) is Lebesgue measure."""
    a = mixed1(Lebesgue(), sample_square, sample_triangle)
    b = mixed1(RadialPower(p=0), sample_square, sample_triangle)
    assert a.value == pytest.approx(b.value)
    assert np.isfinite(a.value)
