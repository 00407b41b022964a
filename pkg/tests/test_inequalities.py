"""
Tests for the inequality checkers on instances with known outcomes.
"""

import math

import pytest

from wbm.exceptions import DegenerateDerivative, NonPositiveMeasure, OriginNotContained, UnsupportedConfiguration
from wbm.models.bodies import Polytope
from wbm.models.concavity import Log, NormalInv, Power
from wbm.models.measures import Gaussian, Lebesgue, RadialExp, RadialPower
from wbm.models.results import EvalResult
from wbm.monitoring.verdicts import Relation, Verdict
from wbm.services import geometry
from wbm.services.inequalities import (
    InequalityChecker,
    bm_constant,
    check_f_concavity,
    classical_minkowski_quadratic,
    concavity_spec,
    dilation_convexity,
    fenchel_bounds,
    log_submodularity,
    minkowski_first,
    minkowski_first_homogeneous,
    minkowski_second,
    radial_modularity,
    reverse_quadratic,
    ruzsa_check,
    ruzsa_shifted_balls,
    supermod_consistency,
    supermod_global,
    surface_monotonicity,
)


# ---------------------------------------------------------------------------
# Concavity and Minkowski-type inequalities
# ---------------------------------------------------------------------------


class TestMinkowskiInequalities:
    """Lebesgue instances with hand-computed sides."""

    def test_brunn_minkowski_concavity(self, sample_lebesgue, sample_square, sample_triangle):
        report = check_f_concavity(sample_lebesgue, Power(s=0.5), sample_square, sample_triangle)
        assert report.verdict == Verdict.HOLDS
        assert 0.1 <= report.details["t"] <= 0.9

    def test_minkowski_first(self, sample_lebesgue, sample_square, sample_triangle):
        # mu(K;L) = 4, mu(K;K) = 8, rhs = 8 + 4 (sqrt(1/2) - 2)
        report = minkowski_first(sample_lebesgue, Power(s=0.5), sample_square, sample_triangle)
        assert report.lhs.value == pytest.approx(4.0)
        assert report.rhs.value == pytest.approx(8.0 + 4.0 * (0.5**0.5 - 2.0))
        assert report.verdict == Verdict.HOLDS

    def test_minkowski_first_homogeneous(self, sample_lebesgue, sample_square, sample_triangle):
        report = minkowski_first_homogeneous(sample_lebesgue, sample_square, sample_triangle)
        assert report.lhs.value == pytest.approx(4.0)
        assert report.rhs.value == pytest.approx(2.0)
        assert report.verdict == Verdict.HOLDS

    def test_minkowski_second(self, sample_lebesgue, sample_square, sample_triangle):
        report = minkowski_second(sample_lebesgue, Power(s=0.5), sample_square, sample_triangle)
        assert report.relation == Relation.LE
        assert report.lhs.value == pytest.approx(4.0)
        assert report.rhs.value == pytest.approx(8.0)
        assert report.verdict == Verdict.HOLDS

    def test_equality_case_is_near_equality(self, sample_lebesgue, sample_square):
        report = minkowski_first(sample_lebesgue, Power(s=0.5), sample_square, geometry.scale(sample_square, 2.0))
        assert report.verdict != Verdict.VIOLATED
        assert report.near_equality

    def test_gaussian_class_is_validated(self, sample_gaussian, sample_square, sample_triangle):
        with pytest.raises(UnsupportedConfiguration):
            minkowski_first(sample_gaussian, Power(s=0.5), sample_triangle, sample_square)

    def test_gaussian_log_concave_form(self, sample_gaussian, sample_square, sample_triangle):
        report = minkowski_first(sample_gaussian, Log(), sample_square, sample_triangle)
        assert report.verdict != Verdict.VIOLATED

    def test_degenerate_derivative_at_full_mass(self, sample_gaussian, sample_square):
        big = Polytope.box([-50.0, -50.0], [50.0, 50.0])
        with pytest.raises(DegenerateDerivative) as excinfo:
            minkowski_first(sample_gaussian, NormalInv(), big, sample_square)
        assert excinfo.value.case == "contains_support"

    def test_degenerate_case_uses_total_mass(self, sample_square):
        full = InequalityChecker._degenerate(
            RadialExp(family="power", q=2.0), NormalInv(), EvalResult.exact(math.pi), None, sample_square
        )
        assert full.case == "contains_support"
        unbounded = InequalityChecker._degenerate(
            RadialPower(p=2), NormalInv(), EvalResult.exact(1e12), None, sample_square
        )
        assert unbounded.case == "minus_infinity"

    def test_homogeneous_form_needs_homogeneous_measure(self, sample_gaussian, sample_square):
        with pytest.raises(UnsupportedConfiguration):
            minkowski_first_homogeneous(sample_gaussian, sample_square, sample_square)

    def test_zero_measure_rejected(self, sample_lebesgue, sample_segment, sample_square):
        with pytest.raises(NonPositiveMeasure):
            check_f_concavity(sample_lebesgue, Power(s=0.5), sample_segment, sample_square)


class TestQuadraticInequalities:
    """Reverse quadratic, Fenchel bracket and the classical quadratic form."""

    def test_classical_planar_quadratic(self, sample_square, sample_triangle):
        # V(B,C) = 2, V(B,B) = 4, V(C,C) = 1/2
        report = classical_minkowski_quadratic(sample_square, sample_square, sample_triangle)
        assert report.lhs.value == pytest.approx(4.0)
        assert report.rhs.value == pytest.approx(2.0)
        assert report.verdict == Verdict.HOLDS

    def test_reverse_quadratic_lebesgue(self, sample_lebesgue, sample_square, sample_triangle, sample_zonotope):
        report = reverse_quadratic(sample_lebesgue, Power(s=0.5), sample_square, sample_triangle, sample_zonotope)
        assert report.verdict != Verdict.VIOLATED
        assert "F_ratio" in report.details

    def test_fenchel_bracket_lebesgue(self, sample_lebesgue, sample_square, sample_triangle, sample_zonotope):
        reports = fenchel_bounds(sample_lebesgue, 0.5, sample_square, sample_triangle, sample_zonotope)
        names = [r.name for r in reports]
        assert names == ["fenchel_bracket_lower", "fenchel_bracket_upper", "fenchel_type_bound", "fenchel_classical"]
        assert all(r.verdict != Verdict.VIOLATED for r in reports)

    def test_fenchel_requires_origin(self, sample_lebesgue, sample_square, sample_triangle):
        moved = geometry.translate(sample_triangle, [3.0, 3.0])
        with pytest.raises(OriginNotContained):
            fenchel_bounds(sample_lebesgue, 0.5, sample_square, moved, sample_square)

    def test_fenchel_rejects_s_out_of_range(self, sample_lebesgue, sample_square):
        with pytest.raises(UnsupportedConfiguration):
            fenchel_bounds(sample_lebesgue, 1.0, sample_square, sample_square, sample_square)


# ---------------------------------------------------------------------------
# Modularity
# ---------------------------------------------------------------------------


class TestModularity:
    """Supermodularity, radial profiles, dilations and log-submodularity."""

    def test_lebesgue_supermodular(self, sample_lebesgue, sample_square, sample_triangle):
        report = supermod_global(sample_lebesgue, sample_square, sample_triangle, sample_square)
        # difference is the mixed area 2 V(triangle, square) = 4
        assert report.margin == pytest.approx(4.0)
        assert report.verdict == Verdict.HOLDS

    def test_reverse_is_submodular_check(self, sample_lebesgue, sample_square, sample_triangle):
        report = supermod_global(sample_lebesgue, sample_square, sample_triangle, sample_square, reverse=True)
        assert report.name == "submod_global"
        assert report.verdict == Verdict.VIOLATED

    def test_consistency_report(self, sample_lebesgue, sample_square, sample_triangle, sample_zonotope):
        reports = supermod_consistency(sample_lebesgue, sample_square, sample_triangle, sample_zonotope)
        assert reports[-1].name == "supermod_consistency"
        assert reports[-1].verdict == Verdict.HOLDS

    def test_lebesgue_radial_profile(self, sample_lebesgue):
        report = radial_modularity(sample_lebesgue, 2)
        assert report.details["profile"] == "increasing"
        assert report.details["super_violations"] == 0
        assert report.verdict != Verdict.VIOLATED

    def test_gaussian_radial_profile_is_neither(self):
        report = radial_modularity(Gaussian(), 2)
        assert report.details["profile"] == "neither"

    def test_gaussian_ball_triples_fail_both_directions(self):
        report = radial_modularity(Gaussian(), 2)
        assert report.verdict == Verdict.VIOLATED
        assert report.details["super_violations"] > 0
        assert report.details["sub_violations"] > 0

    def test_lebesgue_dilation_is_convex(self, sample_lebesgue, sample_square):
        report = dilation_convexity(sample_lebesgue, sample_square)
        assert report.details["shape"] == "convex"
        assert report.details["consistent"]

    def test_log_submodularity(self, sample_lebesgue, sample_square, sample_triangle):
        report = log_submodularity(sample_lebesgue, sample_square, sample_triangle, sample_square)
        assert report.lhs.value == pytest.approx(4.0 * 24.5)
        assert report.rhs.value == pytest.approx(8.5 * 16.0)
        assert report.verdict == Verdict.HOLDS

    def test_bm_constant(self, sample_square, sample_triangle):
        assert bm_constant(sample_square, sample_triangle, sample_square).value == pytest.approx(98.0 / 136.0)

    def test_ruzsa(self, sample_lebesgue, sample_square):
        report = ruzsa_check(sample_lebesgue, sample_square, sample_square, sample_square)
        assert report.verdict == Verdict.HOLDS

    def test_shifted_balls_break_gaussian_ruzsa(self, sample_gaussian, sample_square):
        reports = ruzsa_shifted_balls(sample_gaussian, sample_square, [1.0, 0.0])
        assert [r.details["shift"] for r in reports] == [0.0, 1.0, 2.0, 4.0, 8.0]
        assert all(r.lhs.value == pytest.approx(reports[0].lhs.value) for r in reports)
        assert reports[0].verdict == Verdict.HOLDS
        assert reports[-1].verdict == Verdict.VIOLATED

    def test_shifted_balls_hold_for_lebesgue(self, sample_lebesgue, sample_square):
        reports = ruzsa_shifted_balls(sample_lebesgue, sample_square, [0.0, 2.0])
        assert {r.verdict for r in reports} == {Verdict.HOLDS}

    def test_surface_monotonicity_radial_power(self, sample_radial_power, sample_square):
        report = surface_monotonicity(sample_radial_power, sample_square, sample_square)
        assert report.lhs.value == pytest.approx(8.0 * 32.0 / 3.0)
        assert report.verdict == Verdict.HOLDS

    def test_translation_breaks_gaussian_surface_monotonicity(self, sample_gaussian):
        def phi(x):
            return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)

        K = Polytope.from_points([[0.0], [1.0]], name="unit_interval")
        L = Polytope.from_points([[-5.0]], name="shift")
        report = surface_monotonicity(sample_gaussian, K, L)
        assert report.lhs.value == pytest.approx(phi(-5.0) + phi(-4.0))
        assert report.rhs.value == pytest.approx(phi(0.0) + phi(1.0))
        assert report.verdict == Verdict.VIOLATED


class TestConcavitySpec:
    """Building F from command-line style arguments."""

    def test_kinds(self):
        assert concavity_spec("power", 0.5) == Power(s=0.5)
        assert concavity_spec("log") == Log()
        assert concavity_spec("normal_inv") == NormalInv()

    def test_power_needs_exponent(self):
        with pytest.raises(UnsupportedConfiguration):
            concavity_spec("power")

    def test_unknown_kind(self):
        with pytest.raises(UnsupportedConfiguration):
            concavity_spec("cubic")


def test_lebesgue_label_defaults(sample_square, sample_triangle):
    report = supermod_global(Lebesgue(), sample_square, sample_triangle, sample_triangle)
    assert report.measure == "lebesgue"
    assert report.body_ids == ["square", "triangle", "triangle"]
