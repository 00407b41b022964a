"""
Tests for the one-dimensional convex-function lab: the arc-length weighted
inequality, its equality family, the optimized form, the thin rectangle
probe and the chain decomposition of planar bodies.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

from wbm.exceptions import Negative, NotConvex, UnsupportedConfiguration
from wbm.models.convexfn import ConvexPL
from wbm.monitoring.verdicts import Verdict
from wbm.services import geometry
from wbm.services.convexfn import (
    arc_length_check,
    arc_length_weak_check,
    arclength_witness,
    equality_family,
    thin_rectangle_probe,
    optimized_form_check,
    random_convex_pl,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# ---------------------------------------------------------------------------
# Piecewise-linear functions
# ---------------------------------------------------------------------------


class TestConvexPL:
    """Validation and closed forms."""

    def test_concave_values_rejected(self):
        with pytest.raises(NotConvex):
            ConvexPL(breakpoints=(0.0, 0.5, 1.0), values=(0.0, 1.0, 0.0))

    def test_negative_values_rejected_when_required(self):
        with pytest.raises(Negative):
            ConvexPL(breakpoints=(0.0, 1.0), values=(-1.0, 1.0), nonnegative=True)

    def test_arc_length(self, sample_pl):
        expected = math.hypot(0.5, 0.8) + math.hypot(0.5, 0.5)
        assert sample_pl.arc_length() == pytest.approx(expected)

    def test_weighted_arc_integral(self, sample_pl):
        expected = math.sqrt(1 + 1.6**2) * 0.5 * 0.6 + math.sqrt(2.0) * 0.5 * 0.45
        assert sample_pl.weighted_arc_integral() == pytest.approx(expected)

    def test_refinement_preserves_integrals(self, sample_pl):
        fine = sample_pl.refined(4)
        assert fine.arc_length() == pytest.approx(sample_pl.arc_length())
        assert fine.weighted_arc_integral() == pytest.approx(sample_pl.weighted_arc_integral())

    def test_normalized_domain(self):
        h = ConvexPL(breakpoints=(-1.0, 0.0, 3.0), values=(2.0, 0.0, 4.0))
        g = h.normalized()
        assert (g.a, g.b) == (0.0, 1.0)
        assert g.values == pytest.approx((0.5, 0.0, 1.0))


# ---------------------------------------------------------------------------
# Arc-length weighted inequality
# ---------------------------------------------------------------------------


class TestArcLengthInequality:
    """The inequality, its weak form and equality family."""

    def test_sample_function(self, sample_pl):
        report = arc_length_check(sample_pl)
        assert report.name == "arc_length"
        assert report.lhs.value == pytest.approx(1.99)
        assert report.verdict == Verdict.HOLDS
        assert report.details["weak_margin"] >= report.margin

    def test_constant_function_margin(self):
        # margin of h = c on [0, w] is 2 (c - w/2)^2
        h = ConvexPL(breakpoints=(0.0, 2.0), values=(0.3, 0.3))
        assert arc_length_check(h).margin == pytest.approx(2.0 * (0.3 - 1.0) ** 2)

    def test_restriction_to_subinterval(self, sample_pl):
        report = arc_length_check(sample_pl, 0.25, 0.75)
        assert report.details["a"] == 0.25
        assert report.details["pieces"] == 2

    def test_interval_outside_domain(self, sample_pl):
        with pytest.raises(UnsupportedConfiguration):
            arc_length_check(sample_pl, -1.0, 0.5)

    def test_negative_function_rejected(self):
        h = ConvexPL(breakpoints=(0.0, 1.0), values=(-0.5, 1.0))
        with pytest.raises(Negative):
            arc_length_check(h)

    def test_weak_form(self, sample_pl):
        report = arc_length_weak_check(sample_pl)
        assert report.lhs.value == pytest.approx(2.49)
        assert report.verdict == Verdict.HOLDS

    @pytest.mark.parametrize("alpha,a,b", [(0.0, 0.0, 1.0), (0.7, -1.0, 2.0), (-2.5, 0.5, 0.75)])
    def test_equality_family_is_tight(self, alpha, a, b):
        h = equality_family(alpha, a, b)
        assert h.is_nonnegative()
        report = arc_length_check(h)
        assert report.near_equality
        assert report.verdict != Verdict.VIOLATED

    def test_equality_family_needs_interval(self):
        with pytest.raises(UnsupportedConfiguration):
            equality_family(1.0, 1.0, 1.0)

    @hyp_settings(max_examples=100, deadline=None)
    @given(seed=seeds)
    def test_random_functions_never_violate(self, seed):
        h = random_convex_pl(np.random.default_rng(seed))
        assert h.is_nonnegative()
        assert arc_length_check(h).verdict != Verdict.VIOLATED


class TestOptimizedForm:
    """Translation-optimized form on [0, 1]."""

    def test_sample_function(self, sample_pl):
        report = optimized_form_check(sample_pl)
        assert report.details["round_trip_gap"] == pytest.approx(0.0, abs=1e-12)
        assert report.details["normalization_gap"] == pytest.approx(0.0, abs=1e-12)
        assert report.verdict != Verdict.VIOLATED

    def test_linear_function_is_tight(self):
        report = optimized_form_check(ConvexPL.linear(0.0, 1.0, 0.0, 1.0))
        assert report.margin == pytest.approx(0.0, abs=1e-12)

    @hyp_settings(max_examples=100, deadline=None)
    @given(seed=seeds)
    def test_signed_functions_never_violate(self, seed):
        h = random_convex_pl(np.random.default_rng(seed), nonnegative=False, domain=(0.0, 1.0))
        report = optimized_form_check(h)
        assert report.verdict != Verdict.VIOLATED
        assert report.details["round_trip_gap"] == pytest.approx(0.0, abs=1e-9 * max(1.0, report.lhs.value))


# ---------------------------------------------------------------------------
# Thin rectangle probe
# ---------------------------------------------------------------------------


class TestThinRectangleProbe:
    """Boundary against area integrals on [0,1] x [0,eps]."""

    def test_zero_function(self):
        eps = 0.1
        report = thin_rectangle_probe(None, 2, 0.0, eps)
        expected = 2.0 / 3.0 + eps + eps**2 + 2.0 * eps**3 / 3.0
        assert report.lhs.value == pytest.approx(expected, abs=1e-12)
        assert report.rhs.value == pytest.approx(0.0, abs=1e-15)
        assert report.verdict == Verdict.HOLDS

    def test_details_echo_parameters(self):
        report = thin_rectangle_probe(1, 2, 0.5, 0.05)
        assert report.details == {"alpha": 1, "beta": 2, "lambda": 0.5, "eps": 0.05}
        assert report.rhs.value > 0

    @pytest.mark.parametrize(
        "alpha,beta,lam,eps", [(4, 2, 1.0, 0.1), (1, 0, 1.0, 0.1), (1, 2, 1.0, 0.0), (1, 2, -1.0, 0.1)]
    )
    def test_invalid_parameters(self, alpha, beta, lam, eps):
        with pytest.raises(UnsupportedConfiguration):
            thin_rectangle_probe(alpha, beta, lam, eps)


# ---------------------------------------------------------------------------
# Chain decomposition
# ---------------------------------------------------------------------------


class TestArclengthWitness:
    """Upper and lower chains of planar bodies."""

    def test_square_chains(self, sample_square):
        witness = arclength_witness(sample_square)
        assert (witness.a, witness.b) == (-1.0, 1.0)
        assert witness.f(0.0) == pytest.approx(1.0)
        assert witness.g(0.0) == pytest.approx(-1.0)
        assert np.allclose(witness.reconstruct(), geometry.vertices(sample_square))

    def test_rotated_triangle_round_trip(self, sample_triangle):
        witness = arclength_witness(sample_triangle, u=(1.0, 0.0))
        assert (witness.a, witness.b) == pytest.approx((-1.0, 0.0))
        assert np.allclose(witness.reconstruct(), geometry.vertices(sample_triangle))

    def test_reduced_report(self, sample_square):
        report = arclength_witness(sample_square).reduced_report()
        assert report.name == "arclength_reduction"
        assert report.lhs.value == pytest.approx(8.0)

    def test_flat_body_has_no_width(self):
        from wbm.models.bodies import Segment

        with pytest.raises(UnsupportedConfiguration):
            arclength_witness(Segment(a=(0.0, 0.0), b=(0.0, 1.0)))
