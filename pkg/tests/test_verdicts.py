"""
Tests for error-carrying results, verdict decisions and sweep summaries.
"""

import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st
from pydantic import ValidationError

from wbm.config import WBMConstants, settings
from wbm.models.results import EvalMethod, EvalResult, total
from wbm.monitoring.verdicts import (
    InequalityReport,
    Relation,
    Verdict,
    decide_verdict,
    error_budget,
    summarize,
)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
errors = st.floats(min_value=0.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def _report(lhs, rhs, relation=Relation.GE, lhs_err=0.0, rhs_err=0.0):
    def result(value, err):
        if err == 0.0:
            return EvalResult.exact(value)
        return EvalResult.estimate(value, err, EvalMethod.QUADRATURE)

    return InequalityReport(name="sample_check", lhs=result(lhs, lhs_err), rhs=result(rhs, rhs_err), relation=relation)


# ---------------------------------------------------------------------------
# EvalResult
# ---------------------------------------------------------------------------


class TestEvalResult:
    """Arithmetic with error propagation."""

    def test_exact_arithmetic_stays_exact(self):
        out = EvalResult.exact(2.0) * 3 + 1
        assert out.value == 7.0
        assert out.method == EvalMethod.EXACT
        assert out.abs_error == 0.0

    def test_errors_add(self):
        a = EvalResult.estimate(1.0, 0.1, EvalMethod.QUADRATURE)
        b = EvalResult.estimate(2.0, 0.2, EvalMethod.QMC)
        out = a - b
        assert out.value == pytest.approx(-1.0)
        assert out.abs_error == pytest.approx(0.3)
        assert out.method == EvalMethod.QMC

    def test_product_error_to_first_order(self):
        a = EvalResult.estimate(2.0, 0.1, EvalMethod.QUADRATURE)
        out = a * a
        assert out.abs_error == pytest.approx(0.4)

    def test_exact_with_error_rejected(self):
        with pytest.raises(ValidationError):
            EvalResult(value=1.0, abs_error=0.1, method=EvalMethod.EXACT)

    def test_non_exact_without_error_rejected(self):
        with pytest.raises(ValidationError):
            EvalResult(value=1.0, abs_error=0.0, method=EvalMethod.QMC)

    def test_estimate_floors_zero_error(self):
        out = EvalResult.estimate(1.0, 0.0, EvalMethod.QMC)
        assert out.abs_error > 0.0

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            EvalResult.exact(1.0) / 0

    def test_map_propagates_through_derivative(self):
        a = EvalResult.estimate(4.0, 0.4, EvalMethod.QUADRATURE)
        out = a.map(lambda x: x**0.5, lambda x: 0.5 * x**-0.5)
        assert out.value == pytest.approx(2.0)
        assert out.abs_error == pytest.approx(0.1)

    def test_total(self):
        assert total([EvalResult.exact(1.0), EvalResult.exact(2.5)]).value == 3.5

    def test_method_ordering(self):
        methods = [EvalMethod.EXACT, EvalMethod.FD_EXTRAPOLATED, EvalMethod.QMC]
        assert EvalMethod.worst(methods) == EvalMethod.FD_EXTRAPOLATED


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


class TestVerdicts:
    """Decision rule of margin against budget."""

    def test_inequality_outcomes(self):
        assert decide_verdict(1.0, 0.1) == Verdict.HOLDS
        assert decide_verdict(-1.0, 0.1) == Verdict.VIOLATED
        assert decide_verdict(0.05, 0.1) == Verdict.INCONCLUSIVE

    def test_identity_outcomes(self):
        assert decide_verdict(0.05, 0.1, Relation.EQ) == Verdict.HOLDS
        assert decide_verdict(0.5, 0.1, Relation.EQ) == Verdict.VIOLATED

    def test_le_margin_is_rhs_minus_lhs(self):
        report = _report(1.0, 2.0, Relation.LE)
        assert report.margin == 1.0
        assert report.verdict == Verdict.HOLDS

    def test_budget_has_rounding_floor(self):
        budget = error_budget(EvalResult.exact(1e6), EvalResult.exact(0.0))
        assert budget == pytest.approx(settings.ROUNDING_RTOL * 1e6)

    def test_budget_scales_with_tolerance(self):
        lhs = EvalResult.estimate(1.0, 0.01, EvalMethod.QMC)
        rhs = EvalResult.exact(0.0)
        small = error_budget(lhs, rhs, tolerance_scale=1.0)
        large = error_budget(lhs, rhs, tolerance_scale=10.0)
        assert large > small
        assert small == pytest.approx(settings.VERDICT_SIGMA * 0.01 + settings.ROUNDING_RTOL)

    def test_rtol_widens_budget(self):
        report = _report(1.0, 1.0 + 1e-6, Relation.EQ)
        assert report.verdict == Verdict.VIOLATED
        report.rtol = 1e-5
        assert report.verdict == Verdict.HOLDS

    def test_equal_exact_sides_are_near_equality(self):
        report = _report(2.0, 2.0)
        assert report.verdict == Verdict.INCONCLUSIVE
        assert report.near_equality

    def test_row_follows_report_columns(self):
        row = _report(2.0, 1.0).with_claim("demo").to_row()
        assert list(row) == list(WBMConstants.REPORT_COLUMNS)
        assert row["claim_id"] == "demo"
        assert row["verdict"] == "holds"

    @hyp_settings(max_examples=200, deadline=None)
    @given(lhs=finite, rhs=finite, lhs_err=errors, rhs_err=errors)
    def test_holds_is_robust_to_errors(self, lhs, rhs, lhs_err, rhs_err):
        """A decided verdict survives any perturbation inside the error bars."""
        report = _report(lhs, rhs, Relation.GE, lhs_err, rhs_err)
        worst_low = (lhs - lhs_err) - (rhs + rhs_err)
        worst_high = (lhs + lhs_err) - (rhs - rhs_err)
        if report.verdict == Verdict.HOLDS:
            assert worst_low > 0
        elif report.verdict == Verdict.VIOLATED:
            assert worst_high < 0


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------


class TestSweepSummary:
    """Aggregation of report verdicts."""

    def test_counts(self):
        reports = [_report(2.0, 1.0), _report(1.0, 2.0), _report(1.0, 1.0)]
        summary = summarize("demo", reports)
        assert summary.checks_run == 3
        assert summary.checks_passed == 1
        assert summary.checks_failed == 1
        assert summary.inconclusive == 1
        assert not summary.is_healthy
        assert summary.inconclusive_fraction == pytest.approx(1.0 / 3.0)
        assert summary.summary_line() == "holds=1 violated=1 inconclusive=1"

    def test_empty_summary_is_healthy(self):
        summary = summarize("empty", [], log=False)
        assert summary.is_healthy
        assert summary.inconclusive_fraction == 0.0
        assert summary.to_dict()["checks_run"] == 0
