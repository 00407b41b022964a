"""
Tests for body models and convex geometry: support functions, canonical
vertex sets, Minkowski sums, predicates and zonotope decomposition.
"""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st
from pydantic import ValidationError

from wbm.exceptions import DimensionMismatch, OriginNotContained
from wbm.models.bodies import Ball, Polytope, ScaledSum, Zonotope, dump_body, load_body, parse_body
from wbm.services import geometry

integer_points = st.lists(
    st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
    min_size=1,
    max_size=8,
)
angles = st.floats(min_value=0.0, max_value=2.0 * math.pi, allow_nan=False)


def _direction(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta)])


# ---------------------------------------------------------------------------
# Model validation
# ---------------------------------------------------------------------------


class TestBodyModels:
    """Parsing and validation of body documents."""

    def test_parse_polytope_document(self):
        body = parse_body('{"type": "polytope", "vertices": [[0, 0], [1, 0], [0, 1]]}')
        assert isinstance(body, Polytope)
        assert body.dim == 2

    def test_parse_nested_sum(self):
        body = parse_body(
            {
                "type": "sum",
                "terms": [
                    {"scale": 2.0, "body": {"type": "ball", "center": [0, 0], "radius": 1}},
                    {"scale": 1.0, "body": {"type": "segment", "a": [0, 0], "b": [1, 0]}},
                ],
            }
        )
        assert isinstance(body, ScaledSum)
        assert body.dim == 2

    def test_mixed_vertex_dimensions_rejected(self):
        with pytest.raises(ValidationError):
            Polytope(vertices=((0.0, 0.0), (1.0, 0.0, 0.0)))

    def test_nan_coordinates_rejected(self):
        with pytest.raises(ValidationError):
            Polytope(vertices=((0.0, float("nan")),))

    def test_zero_generator_rejected(self):
        with pytest.raises(ValidationError):
            Zonotope(center=(0.0, 0.0), generators=((0.0, 0.0),))

    def test_negative_radius_rejected(self):
        with pytest.raises(ValidationError):
            Ball(center=(0.0, 0.0), radius=-1.0)

    def test_sum_terms_must_share_dimension(self):
        with pytest.raises(ValidationError):
            parse_body(
                {
                    "type": "sum",
                    "terms": [
                        {"scale": 1.0, "body": {"type": "ball", "center": [0, 0], "radius": 1}},
                        {"scale": 1.0, "body": {"type": "ball", "center": [0, 0, 0], "radius": 1}},
                    ],
                }
            )

    def test_load_body_names_from_file_stem(self, tmp_path, sample_triangle):
        path = tmp_path / "wedge.json"
        path.write_text(dump_body(sample_triangle.model_copy(update={"name": None})))
        body = load_body(path)
        assert body.name == "wedge"
        assert json.loads(dump_body(body))["type"] == "polytope"


# ---------------------------------------------------------------------------
# Support functions
# ---------------------------------------------------------------------------


class TestSupport:
    """h_K(u) for each representation."""

    def test_square_support(self, sample_square):
        assert geometry.support(sample_square, [1.0, 0.0]) == 1.0
        assert geometry.support(sample_square, [1.0, 1.0]) == 2.0

    def test_zonotope_support(self, sample_zonotope):
        assert geometry.support(sample_zonotope, [1.0, 0.0]) == 2.0
        assert geometry.support(sample_zonotope, [1.0, -1.0]) == 2.0

    def test_ball_support(self):
        ball = Ball(center=(1.0, 0.0), radius=2.0)
        assert geometry.support(ball, [1.0, 0.0]) == pytest.approx(3.0)
        assert geometry.support(ball, [0.0, 1.0]) == pytest.approx(2.0)

    def test_segment_support(self, sample_segment):
        assert geometry.support(sample_segment, [0.0, 1.0]) == 0.0
        assert geometry.support(sample_segment, [-2.0, 0.0]) == 2.0

    def test_vectorized_support(self, sample_square):
        values = geometry.support(sample_square, np.eye(2))
        assert values.shape == (2,)
        assert np.allclose(values, [1.0, 1.0])

    def test_direction_dimension_checked(self, sample_square):
        with pytest.raises(DimensionMismatch):
            geometry.support(sample_square, [1.0, 0.0, 0.0])

    def test_support_point_is_face_midpoint(self, sample_square):
        assert np.allclose(geometry.support_point(sample_square, [1.0, 0.0]), [1.0, 0.0])
        assert np.allclose(geometry.support_point(sample_square, [1.0, 1.0]), [1.0, 1.0])

    @hyp_settings(max_examples=50, deadline=None)
    @given(P=integer_points, Q=integer_points, theta=angles)
    def test_support_is_additive(self, P, Q, theta):
        """h_{K+L} = h_K + h_L for polygons with integer vertices."""
        K, L = Polytope.from_points(P), Polytope.from_points(Q)
        u = _direction(theta)
        total = geometry.support(geometry.minkowski_sum(K, L), u)
        expected = geometry.support(K, u) + geometry.support(L, u)
        assert total == pytest.approx(expected, abs=1e-9)

    @hyp_settings(max_examples=50, deadline=None)
    @given(P=integer_points, t=st.floats(min_value=0.0, max_value=10.0), theta=angles)
    def test_support_is_homogeneous(self, P, t, theta):
        K = Polytope.from_points(P)
        u = _direction(theta)
        assert geometry.support(geometry.scale(K, t), u) == pytest.approx(t * geometry.support(K, u), abs=1e-9)


# ---------------------------------------------------------------------------
# Canonical vertex sets and sums
# ---------------------------------------------------------------------------


class TestCanonicalVertices:
    """Extreme-point extraction and ordering."""

    def test_interior_points_dropped(self):
        V = geometry.canonical_vertices([[0, 0], [2, 0], [2, 2], [0, 2], [1, 1], [1, 0]])
        assert len(V) == 4

    def test_planar_order_is_counter_clockwise_from_lex_smallest(self):
        V = geometry.canonical_vertices([[1, 1], [0, 1], [1, 0], [0, 0]])
        assert np.allclose(V[0], [0.0, 0.0])
        x, y = V[:, 0], V[:, 1]
        signed_area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        assert signed_area == pytest.approx(1.0)

    def test_collinear_points_reduce_to_endpoints(self):
        V = geometry.canonical_vertices([[0, 0], [1, 1], [3, 3], [2, 2]])
        assert np.allclose(V, [[0, 0], [3, 3]])

    def test_non_finite_points_rejected(self):
        from wbm.exceptions import UnboundedBody

        with pytest.raises(UnboundedBody):
            geometry.canonical_vertices([[0.0, 0.0], [math.inf, 0.0]])

    @hyp_settings(max_examples=50, deadline=None)
    @given(P=integer_points)
    def test_canonicalization_is_idempotent(self, P):
        once = geometry.canonical_vertices(P)
        twice = geometry.canonical_vertices(once)
        assert np.array_equal(once, twice)


class TestMinkowskiSum:
    """Explicit and symbolic Minkowski sums."""

    def test_square_plus_square(self, sample_square):
        total = geometry.minkowski_sum(sample_square, sample_square)
        assert isinstance(total, Polytope)
        V = np.asarray(total.vertices)
        assert np.allclose(np.abs(V), 2.0)
        assert len(V) == 4

    def test_zonotope_vertices(self, sample_zonotope):
        assert len(geometry.vertices(sample_zonotope)) == 6

    def test_two_balls_stay_a_ball(self, sample_disk):
        total = geometry.minkowski_sum(sample_disk, Ball(center=(1.0, 0.0), radius=0.5))
        assert isinstance(total, Ball)
        assert total.radius == 1.5
        assert total.center == (1.0, 0.0)

    def test_curved_sum_is_symbolic(self, sample_square, sample_disk):
        total = geometry.minkowski_sum(sample_square, sample_disk)
        assert isinstance(total, ScaledSum)
        assert geometry.support(total, [1.0, 0.0]) == pytest.approx(2.0)

    def test_dimension_mismatch(self, sample_square, sample_interval):
        with pytest.raises(DimensionMismatch):
            geometry.minkowski_sum(sample_square, sample_interval)

    def test_negative_dilation_rejected(self, sample_square):
        with pytest.raises(ValueError):
            geometry.scale(sample_square, -1.0)

    def test_combination_matches_weighted_support(self, sample_square, sample_triangle):
        body = geometry.minkowski_combination([(0.25, sample_square), (0.75, sample_triangle)])
        u = np.array([0.6, 0.8])
        expected = 0.25 * geometry.support(sample_square, u) + 0.75 * geometry.support(sample_triangle, u)
        assert geometry.support(body, u) == pytest.approx(expected)

    def test_translate(self, sample_square):
        moved = geometry.translate(sample_square, [1.0, 2.0])
        assert geometry.support(moved, [0.0, 1.0]) == pytest.approx(3.0)


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


class TestPredicates:
    """Symmetry, containment and dimension."""

    def test_symmetry(self, sample_square, sample_triangle, sample_zonotope, sample_disk):
        assert geometry.is_symmetric(sample_square)
        assert geometry.is_symmetric(sample_zonotope)
        assert geometry.is_symmetric(sample_disk)
        assert not geometry.is_symmetric(sample_triangle)

    def test_symmetry_center_of_translate(self, sample_square):
        center = geometry.symmetry_center(geometry.translate(sample_square, [1.0, 2.0]))
        assert np.allclose(center, [1.0, 2.0])

    def test_triangle_has_no_symmetry_center(self, sample_triangle):
        assert geometry.symmetry_center(sample_triangle) is None

    def test_contains_origin(self, sample_triangle):
        assert geometry.contains_origin(sample_triangle)
        assert not geometry.contains_origin(geometry.translate(sample_triangle, [1.0, 1.0]))

    def test_containment(self, sample_square, sample_triangle, sample_disk):
        assert geometry.contains(sample_square, sample_triangle)
        assert not geometry.contains(sample_triangle, sample_square)
        assert geometry.contains(sample_square, sample_disk)

    def test_affine_dimension(self, sample_square, sample_segment):
        assert geometry.affine_dimension(sample_square) == 2
        assert geometry.affine_dimension(sample_segment) == 1
        assert not geometry.full_dimensional(sample_segment)
        assert geometry.affine_dimension(Polytope.from_points([[1.0, 1.0]])) == 0

    def test_body_label(self, sample_square):
        assert geometry.body_label(sample_square) == "square"
        assert geometry.body_label(Ball.unit(2, radius=2.0)) == "ball(r=2)"


# ---------------------------------------------------------------------------
# Zonotope decomposition
# ---------------------------------------------------------------------------


class TestZonotopeDecomposition:
    """Writing an origin-containing zonotope as a sum of segments [0, v]."""

    @pytest.mark.parametrize("center", [(0.0, 0.0), (0.5, 0.0), (0.3, -0.6)])
    def test_segments_reproduce_support(self, center):
        Z = Zonotope(center=center, generators=((1.0, 0.0), (0.0, 1.0), (1.0, 1.0)))
        segments = geometry.zonotope_origin_decomposition(Z)
        assert all(np.allclose(s.a, 0.0) for s in segments)
        net = geometry.direction_net(2)
        total = sum(geometry.support(s, net) for s in segments)
        assert np.allclose(total, geometry.support(Z, net), atol=1e-9)

    def test_origin_outside_raises(self):
        Z = Zonotope(center=(3.0, 0.0), generators=((1.0, 0.0), (0.0, 1.0)))
        with pytest.raises(OriginNotContained):
            geometry.zonotope_origin_decomposition(Z)
