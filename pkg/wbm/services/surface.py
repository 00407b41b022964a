"""
Surface area measures, weighted boundary integrals and weighted mixed
surface measures.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np
import structlog
from scipy.spatial import ConvexHull
from scipy.special import ndtri

from wbm.config import settings
from wbm.exceptions import UnsupportedCase, UnsupportedRepresentation
from wbm.models.bodies import Ball, Segment
from wbm.models.measures import sphere_area
from wbm.models.results import EvalMethod, EvalResult
from wbm.services import geometry
from wbm.services.planar import TWO_PI, PlanarBody, _lift_breakpoints, planar_body, unit
from wbm.services.quadrature import interval_rule, sobol_replicates, sphere_rule_3d, triangle_rule

logger = structlog.get_logger(__name__)

ArcDensity = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Arc:
    """Absolutely continuous part on the circle: density(theta) d theta on [theta0, theta1]."""

    theta0: float
    theta1: float
    density: ArcDensity
    breakpoints: Tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class SphericalMeasure:
    """A signed measure on S^{n-1}: atoms split into nonnegative parts, plus planar arcs.

    ``weight_error`` bounds the total absolute error of the atom weights;
    ``method`` records how the weights were obtained.
    """

    dim: int
    normals: np.ndarray
    positive: np.ndarray
    negative: np.ndarray
    arcs: Tuple[Arc, ...] = ()
    method: EvalMethod = EvalMethod.EXACT
    weight_error: float = 0.0
    kind: str = field(default="atomic")

    @classmethod
    def from_signed(cls, dim, normals, weights, arcs=(), method=EvalMethod.EXACT, weight_error=0.0, kind="atomic"):
        normals = np.asarray(normals, dtype=float).reshape(-1, dim)
        weights = np.asarray(weights, dtype=float).reshape(-1)
        return cls(
            dim=dim,
            normals=normals,
            positive=np.maximum(weights, 0.0),
            negative=np.maximum(-weights, 0.0),
            arcs=tuple(arcs),
            method=method,
            weight_error=float(weight_error),
            kind=kind if not arcs else "parametrized",
        )

    @property
    def weights(self) -> np.ndarray:
        return self.positive - self.negative

    # ------------------------------------------------------------------
    # Integration
    # ------------------------------------------------------------------

    def integrate(self, f: Callable[[np.ndarray], np.ndarray], breakpoints: Sequence[float] = ()) -> EvalResult:
        """Integral of f (vectorized over rows of unit vectors) against the measure.

        Arcs are split at the given angular breakpoints (kinks of f) as well
        as at their own.
        """
        atom_value = float(np.asarray(f(self.normals)) @ self.weights) if len(self.normals) else 0.0
        err = 0.0
        method = self.method
        if self.weight_error:
            scale = float(np.max(np.abs(f(self.normals)))) if len(self.normals) else 0.0
            err += self.weight_error * scale
        arc_value = 0.0
        if self.arcs:
            order = settings.QUADRATURE_ORDER
            coarse = self._integrate_arcs(f, breakpoints, order, refine=False)
            fine = self._integrate_arcs(f, breakpoints, order, refine=True)
            arc_value = fine
            err += max(abs(fine - coarse), settings.ROUNDING_RTOL * abs(fine))
            method = EvalMethod.worst([method, EvalMethod.QUADRATURE])
        value = atom_value + arc_value
        if method == EvalMethod.EXACT:
            return EvalResult.exact(value)
        return EvalResult.estimate(value, err, method)

    def _integrate_arcs(self, f, breakpoints, order: int, refine: bool) -> float:
        total = 0.0
        for arc in self.arcs:
            if arc.theta1 <= arc.theta0:
                continue
            cuts = _lift_breakpoints(list(breakpoints) + list(arc.breakpoints), arc.theta0, arc.theta1)
            theta, w = interval_rule(arc.theta0, arc.theta1, order, cuts, refine)
            total += float(np.sum(w * np.asarray(f(unit(theta))) * arc.density(theta)))
        return total

    def total_mass(self) -> EvalResult:
        return self.integrate(lambda u: np.ones(len(u)))

    def closedness(self) -> np.ndarray:
        """The vector integral of u; zero for surface measures of bounded bodies."""
        return np.array([self.integrate(lambda u, i=i: u[:, i]).value for i in range(self.dim)])

    def to_records(self) -> List[dict]:
        """Atoms as {normal, weight} rows, arcs sampled at their own Gauss nodes."""
        rows = [{"normal": n.tolist(), "weight": float(w)} for n, w in zip(self.normals, self.weights)]
        for arc in self.arcs:
            theta, w = interval_rule(arc.theta0, arc.theta1, 8, arc.breakpoints)
            for t, wt, d in zip(theta, w, arc.density(theta)):
                rows.append({"normal": unit(t).tolist(), "weight": float(wt * d)})
        return rows


# ----------------------------------------------------------------------
# Unweighted surface measures
# ----------------------------------------------------------------------


def _planar_measure(pb: PlanarBody, edge_weight, arc_density_factory) -> Tuple[List, List, List[Arc]]:
    normals, weights, arcs = [], [], []
    for e in pb.edges:
        normals.append(e.normal)
        weights.append(edge_weight(e))
    if pb.radius > 0:
        for cone in pb.cones:
            if cone.span > 0:
                arcs.append(Arc(cone.theta0, cone.theta1, arc_density_factory(cone)))
    return normals, weights, arcs


def surface_measure(body) -> SphericalMeasure:
    """S_K: facet atoms for polytopes, atoms plus arcs for planar bodies.

    Raises:
        UnsupportedRepresentation: for curved bodies in R^n, n >= 3, other than balls
    """
    n = body.dim
    geometry.require_bounded(body)
    if n == 1:
        return SphericalMeasure.from_signed(1, [[-1.0], [1.0]], [1.0, 1.0])
    if n == 2:
        pb = planar_body(body)
        R = pb.radius
        normals, weights, arcs = _planar_measure(pb, lambda e: e.length, lambda cone: lambda t: np.full(np.shape(t), R))
        return SphericalMeasure.from_signed(2, normals, weights, arcs)
    V = geometry.vertices(body)
    if V is not None:
        return _polytope_surface(body, V)
    if isinstance(body, Ball):
        return _ball_surface(body.radius, n, lambda pts: np.ones(len(pts)), body.center)
    raise UnsupportedRepresentation(f"No surface measure for a curved {body.type} in R^{n}")


def _polytope_surface(body, V: np.ndarray) -> SphericalMeasure:
    n = body.dim
    dim = geometry.affine_dimension(body)
    if dim == n:
        data = geometry.hull_data(body)
        return SphericalMeasure.from_signed(n, data.normals, [f.area for f in data.facets])
    if dim == n - 1:
        # flat body: two opposite atoms carrying its (n-1)-volume
        origin, basis = geometry.affine_frame(V)
        normal = np.linalg.svd(np.vstack([basis, np.zeros((1, n))]))[2][-1]
        area = _flat_volume(V, origin, basis)
        return SphericalMeasure.from_signed(n, [normal, -normal], [area, area])
    return SphericalMeasure.from_signed(n, np.zeros((0, n)), [])


def _flat_volume(V, origin, basis) -> float:
    local = (V - origin) @ basis.T
    if local.shape[1] == 1:
        return float(local.max() - local.min())
    return float(ConvexHull(local).volume)


def _ball_surface(R: float, n: int, weight, center, refine: bool = False) -> SphericalMeasure:
    c = np.asarray(center, dtype=float)
    if n == 3:
        dirs, w = sphere_rule_3d(settings.SOLID_QUADRATURE_ORDER, refine)
        weights = w * R**2 * weight(c + R * dirs)
        return SphericalMeasure.from_signed(3, dirs, weights, method=EvalMethod.QUADRATURE, weight_error=_tiny())
    # QMC directions on S^{n-1}
    (pts,) = sobol_replicates(n, settings.QMC_LOG2_POINTS, 1, settings.SEED)
    z = ndtri(np.clip(pts, 1e-12, 1 - 1e-12))
    dirs = z / np.linalg.norm(z, axis=1, keepdims=True)
    area = sphere_area(n) * R ** (n - 1)
    weights = np.full(len(dirs), area / len(dirs)) * weight(c + R * dirs)
    weight_error = area / math.sqrt(len(dirs))
    return SphericalMeasure.from_signed(n, dirs, weights, method=EvalMethod.QMC, weight_error=weight_error)


def _tiny() -> float:
    return float(np.finfo(float).tiny)


# ----------------------------------------------------------------------
# Weighted surface measures
# ----------------------------------------------------------------------


def _facet_integral(phi, simplices: np.ndarray, refine: bool) -> float:
    """Integral of phi over a facet given as a stack of (n-1)-simplices in R^n (n <= 3)."""
    order = settings.FACET_QUADRATURE_ORDER
    total = 0.0
    for s in simplices:
        if len(s) == 2:
            t, w = interval_rule(0.0, 1.0, order, refine=refine)
            pts = s[0] + t[:, None] * (s[1] - s[0])
            total += float(np.linalg.norm(s[1] - s[0]) * (w @ phi(pts)))
        else:
            pts, w = triangle_rule(s[0], s[1], s[2], order, refine)
            total += float(w @ phi(pts))
    return total


def _facet_rule_exact(mu, facet_dim: int) -> bool:
    degree = mu.polynomial_degree()
    if degree is None:
        return False
    order = settings.FACET_QUADRATURE_ORDER
    return degree <= (2 * order - 1 if facet_dim == 1 else 2 * order - 2)


def weighted_surface_measure(mu, body) -> SphericalMeasure:
    """S^mu_K: the density of mu pushed through the Gauss map of K."""
    n = body.dim
    mu.check_dim(n)
    geometry.require_bounded(body)
    phi = mu.density
    if mu.is_constant:
        return surface_measure(body)
    if n == 1:
        lo = -float(geometry.support(body, [-1.0]))
        hi = float(geometry.support(body, [1.0]))
        w = phi(np.array([[lo], [hi]]))
        return SphericalMeasure.from_signed(1, [[-1.0], [1.0]], w)
    if n == 2:
        pb = planar_body(body)
        exact = pb.radius == 0 and _facet_rule_exact(mu, 1)
        measures = []
        for refine in (False, True):
            order = settings.FACET_QUADRATURE_ORDER
            edge_w = []
            for e in pb.edges:
                t, w = interval_rule(0.0, 1.0, order, refine=refine)
                pts = e.start + pb.radius * e.normal + t[:, None] * (e.end - e.start)
                edge_w.append(e.length * float(w @ phi(pts)))
            measures.append(edge_w)
        coarse, fine = (np.asarray(m) for m in measures)
        arcs = []
        R = pb.radius
        if R > 0:
            for cone in pb.cones:
                if cone.span > 0:
                    v = cone.vertex
                    arcs.append(Arc(cone.theta0, cone.theta1, lambda t, v=v: R * phi(v + R * unit(np.atleast_1d(t)))))
        normals = [e.normal for e in pb.edges]
        if exact:
            return SphericalMeasure.from_signed(2, normals, fine, arcs)
        err = float(np.sum(np.abs(fine - coarse))) if len(fine) else 0.0
        return SphericalMeasure.from_signed(
            2, normals, fine, arcs, method=EvalMethod.QUADRATURE, weight_error=max(err, _tiny())
        )
    V = geometry.vertices(body)
    if V is not None and n == 3:
        if geometry.affine_dimension(body) < n:
            raise UnsupportedRepresentation("Weighted surface measure of a flat body in R^3")
        data = geometry.hull_data(body)
        coarse = np.array([_facet_integral(phi, f.simplices, False) for f in data.facets])
        fine = np.array([_facet_integral(phi, f.simplices, True) for f in data.facets])
        if _facet_rule_exact(mu, 2):
            return SphericalMeasure.from_signed(3, data.normals, fine)
        err = float(np.sum(np.abs(fine - coarse)))
        return SphericalMeasure.from_signed(
            3, data.normals, fine, method=EvalMethod.QUADRATURE, weight_error=max(err, _tiny())
        )
    if isinstance(body, Ball):
        coarse = _ball_surface(body.radius, n, phi, body.center)
        if n == 3:
            fine = _ball_surface(body.radius, n, phi, body.center, refine=True)
            err = abs(float(np.sum(fine.weights)) - float(np.sum(coarse.weights)))
            return SphericalMeasure.from_signed(
                3, fine.normals, fine.weights, method=EvalMethod.QUADRATURE, weight_error=max(err, _tiny())
            )
        return coarse
    raise UnsupportedRepresentation(f"No weighted surface measure for {body.type} in R^{n}")


def support_breakpoints(body) -> List[float]:
    """Angular kinks of a planar support function (edge normal angles)."""
    if body is None or body.dim != 2:
        return []
    return planar_body(body).edge_angles()


def weighted_boundary_integral(mu, body, f: Callable[[np.ndarray], np.ndarray], breakpoints=()) -> EvalResult:
    """Integral over the boundary of f(n_K(y)) phi(y)."""
    return weighted_surface_measure(mu, body).integrate(f, breakpoints)


def weighted_surface_area(mu, body) -> EvalResult:
    """mu^+(boundary K) by the boundary formula."""
    return weighted_boundary_integral(mu, body, lambda u: np.ones(len(u)))


# ----------------------------------------------------------------------
# Weighted mixed surface measures
# ----------------------------------------------------------------------


def weighted_mixed_surface_measure(mu, A, B) -> SphericalMeasure:
    """S^mu_{A;B}, normalized so that (n-1) * integral of h_C reproduces mu(A;B,C).

    In the plane this is phi(x_A(u)) dS_B(u) + <grad phi(x_A(u)), x_B(u)> dS_A(u);
    in R^3 it is available for a segment B = [0, v] and polytopal A.

    Raises:
        UnsupportedCase: outside the planar and segment cases
    """
    n = A.dim
    mu.check_dim(n)
    geometry._check_same_dim(A, B)
    if n == 2:
        return _planar_mixed(mu, planar_body(A), planar_body(B))
    if n == 3 and isinstance(B, Segment) and not any(B.a):
        return _shadow_mixed(mu, A, np.asarray(B.b, dtype=float))
    if n == 3 and isinstance(B, Segment) and not any(B.b):
        return _shadow_mixed(mu, A, np.asarray(B.a, dtype=float))
    raise UnsupportedCase(
        "Weighted mixed surface measure is available in the plane and for segments [0, v] in R^3",
        dim=n,
        body=B.type,
    )


def _planar_mixed(mu, pa: PlanarBody, pb: PlanarBody) -> SphericalMeasure:
    phi, grad = mu.density, mu.gradient
    order = settings.FACET_QUADRATURE_ORDER
    normals, weights = [], []

    # phi(x_A(u)) dS_B(u): atoms of B, endpoint average where A has a parallel edge
    for e in pb.edges:
        ang = math.fmod(e.angle + TWO_PI, TWO_PI)
        face = pa.face_at(ang)
        shift = pa.radius * e.normal
        if len(face) >= 2:
            value = 0.5 * float(np.sum(phi(_extreme_pair(face, e.normal) + shift)))
        else:
            value = float(phi((pa.polygon_point(ang) + shift)[None, :])[0])
        normals.append(e.normal)
        weights.append(e.length * value)

    # <grad phi(y), x_B(n_A(y))> over the straight boundary of A
    t, w = interval_rule(0.0, 1.0, order, refine=True)
    for e in pa.edges:
        ang = math.fmod(e.angle + TWO_PI, TWO_PI)
        xb = pb.polygon_point(ang) + pb.radius * e.normal
        pts = e.start + pa.radius * e.normal + t[:, None] * (e.end - e.start)
        normals.append(e.normal)
        weights.append(e.length * float(w @ (grad(pts) @ xb)))

    arcs: List[Arc] = []
    a_kinks = tuple(pb.edge_angles())
    if pb.radius > 0:
        RB = pb.radius
        for cone in pb.cones:
            if cone.span > 0:
                arcs.append(
                    Arc(
                        cone.theta0,
                        cone.theta1,
                        lambda th: RB * phi(pa.boundary_point(np.atleast_1d(th))),
                        tuple(pa.edge_angles()),
                    )
                )
    if pa.radius > 0:
        RA = pa.radius
        for cone in pa.cones:
            if cone.span > 0:
                v = cone.vertex

                def density(th, v=v):
                    th = np.atleast_1d(th)
                    y = v + RA * unit(th)
                    xb = pb.boundary_point(th)
                    return RA * np.sum(grad(y) * xb, axis=1)

                arcs.append(Arc(cone.theta0, cone.theta1, density, a_kinks))

    exact = mu.is_constant or (pa.radius == 0 and _facet_rule_exact(mu, 1))
    method = EvalMethod.EXACT if exact else EvalMethod.QUADRATURE
    err = 0.0 if method == EvalMethod.EXACT else max(settings.ROUNDING_RTOL * float(np.sum(np.abs(weights))), _tiny())
    return SphericalMeasure.from_signed(2, normals, weights, arcs, method=method, weight_error=err)


def _extreme_pair(face: np.ndarray, normal: np.ndarray) -> np.ndarray:
    tangent = np.array([-normal[1], normal[0]])
    proj = face @ tangent
    return face[[int(np.argmin(proj)), int(np.argmax(proj))]]


def _shadow_mixed(mu, A, v: np.ndarray) -> SphericalMeasure:
    """Mixed surface measure of a 3-D polytope A with the segment [0, v].

    Upward facets (<u, v> > 0) carry the integral of <grad phi, v>; each edge of
    the shadow of A along v, with outer normal w perpendicular to v, carries
    |v| times the integral of phi along the upper lift of the edge. Both are
    divided by n - 1 = 2.
    """
    data = geometry.hull_data(A)
    grad, phi = mu.gradient, mu.density
    norm_v = float(np.linalg.norm(v))
    if norm_v == 0:
        return SphericalMeasure.from_signed(3, np.zeros((0, 3)), [])
    vhat = v / norm_v
    tol = settings.GEOMETRY_TOL
    order = settings.FACET_QUADRATURE_ORDER

    normals, weights = [], []
    for facet in data.facets:
        if facet.normal @ vhat > tol:
            value = 0.0
            for s in facet.simplices:
                pts, w = triangle_rule(s[0], s[1], s[2], order, refine=True)
                value += float(w @ (grad(pts) @ v))
            normals.append(facet.normal)
            weights.append(value / 2.0)

    # shadow polygon in the plane orthogonal to v
    basis = np.linalg.svd(vhat[None, :])[2][1:]
    proj = (data.points - np.outer(data.points @ vhat, vhat)) @ basis.T
    shadow = geometry.canonical_vertices(proj)
    up = [f for f in data.facets if f.normal @ vhat > tol]
    up_normals = np.array([f.normal for f in up])
    up_offsets = np.array([f.offset for f in up])

    def top(z3: np.ndarray) -> np.ndarray:
        # highest point of A over each plane point z
        s = (up_offsets[None, :] - z3 @ up_normals.T) / (up_normals @ vhat)[None, :]
        return z3 + np.min(s, axis=1)[:, None] * vhat

    for i in range(len(shadow)):
        p, q = shadow[i], shadow[(i + 1) % len(shadow)]
        d = q - p
        length = float(np.linalg.norm(d))
        w2 = np.array([d[1], -d[0]]) / length
        w3 = w2 @ basis
        rel = ((proj - p) @ d) / (d @ d)
        off = np.abs((proj - p) @ w2)
        cuts = sorted(set(float(r) for r, o in zip(rel, off) if o <= 1e-9 and 0.0 < r < 1.0))
        tt, ww = interval_rule(0.0, 1.0, order, cuts)
        z2 = p + tt[:, None] * d
        z3 = z2 @ basis
        normals.append(w3)
        weights.append(norm_v * length * float(ww @ phi(top(z3))) / 2.0)

    method = EvalMethod.EXACT if mu.is_constant else EvalMethod.QUADRATURE
    err = 0.0 if method == EvalMethod.EXACT else max(settings.ROUNDING_RTOL * float(np.sum(np.abs(weights))), _tiny())
    return SphericalMeasure.from_signed(3, normals, weights, method=method, weight_error=err)
