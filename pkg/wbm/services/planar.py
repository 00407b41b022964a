"""
Exact planar decomposition: every planar body written as conv(V) + R * B_2^2.

The boundary of such a body is a chain of shifted polygon edges joined by
circular arcs of radius R centered at the polygon vertices. Every 2-D path
(measures, boundary integrals, mixed surface measures) works through this
parametrization.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import comb

from wbm.config import settings
from wbm.exceptions import DimensionMismatch
from wbm.models.bodies import Ball, ScaledSum
from wbm.services import geometry
from wbm.services.quadrature import gauss_legendre, interval_rule, square_rule, triangle_rule

TWO_PI = 2.0 * math.pi


def unit(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


@dataclass(frozen=True, eq=False)
class Edge:
    start: np.ndarray
    end: np.ndarray
    normal: np.ndarray

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    @property
    def angle(self) -> float:
        return float(math.atan2(self.normal[1], self.normal[0]))


@dataclass(frozen=True, eq=False)
class VertexCone:
    """Normal cone of a polygon vertex, swept counter-clockwise from theta0 to theta1."""

    vertex: np.ndarray
    theta0: float
    theta1: float

    @property
    def span(self) -> float:
        return self.theta1 - self.theta0

    def covers(self, theta: np.ndarray) -> np.ndarray:
        rel = np.mod(np.asarray(theta) - self.theta0, TWO_PI)
        return rel <= self.span + 1e-12


@dataclass(frozen=True, eq=False)
class PlanarBody:
    """conv(vertices) + radius * B_2^2 with vertices counter-clockwise."""

    vertices: np.ndarray
    radius: float = 0.0
    name: Optional[str] = None

    # ------------------------------------------------------------------
    # Combinatorics
    # ------------------------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.vertices)

    @cached_property
    def edges(self) -> List[Edge]:
        """Polygon edges i -> i+1 with outward normals; a segment gives both directions."""
        V = self.vertices
        if self.k == 1:
            return []
        out = []
        for i in range(self.k):
            a, b = V[i], V[(i + 1) % self.k]
            d = b - a
            length = float(np.linalg.norm(d))
            out.append(Edge(start=a, end=b, normal=np.array([d[1], -d[0]]) / length))
        return out

    @cached_property
    def cones(self) -> List[VertexCone]:
        V = self.vertices
        if self.k == 1:
            return [VertexCone(vertex=V[0], theta0=0.0, theta1=TWO_PI)]
        edges = self.edges
        cones = []
        for i in range(self.k):
            incoming = edges[i - 1].angle
            outgoing = edges[i].angle
            span = math.fmod(outgoing - incoming + 2 * TWO_PI, TWO_PI)
            cones.append(VertexCone(vertex=V[i], theta0=incoming, theta1=incoming + span))
        return cones

    def edge_angles(self) -> List[float]:
        """Normal angles of the polygon edges in [0, 2 pi)."""
        return sorted(math.fmod(e.angle + TWO_PI, TWO_PI) for e in self.edges)

    # ------------------------------------------------------------------
    # Support and Gauss map
    # ------------------------------------------------------------------

    def support(self, U: np.ndarray) -> np.ndarray:
        U = np.atleast_2d(U)
        return np.max(U @ self.vertices.T, axis=1) + self.radius * np.linalg.norm(U, axis=1)

    def polygon_point(self, theta: float) -> np.ndarray:
        """Support point of the polygon part at normal angle theta (edge midpoint on ties)."""
        u = unit(theta)
        return geometry._face_midpoint(self._face(u), u)

    def _face(self, u: np.ndarray) -> np.ndarray:
        scores = self.vertices @ u
        best = scores.max()
        return self.vertices[scores >= best - settings.GEOMETRY_TOL * max(1.0, abs(best))]

    def face_at(self, theta: float) -> np.ndarray:
        """Polygon face (vertex rows) exposed in direction theta."""
        return self._face(unit(theta))

    def boundary_point(self, theta) -> np.ndarray:
        """x_K(u(theta)): the boundary point with outer normal u (face midpoint on ties)."""
        theta = np.atleast_1d(theta)
        pts = np.stack([self.polygon_point(t) for t in theta])
        return pts + self.radius * unit(theta)

    # ------------------------------------------------------------------
    # Scalars
    # ------------------------------------------------------------------

    @cached_property
    def polygon_area(self) -> float:
        if self.k < 3:
            return 0.0
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @cached_property
    def polygon_perimeter(self) -> float:
        return float(sum(e.length for e in self.edges))

    @property
    def area(self) -> float:
        """Steiner formula: |P| + per(P) R + pi R^2."""
        return self.polygon_area + self.polygon_perimeter * self.radius + math.pi * self.radius**2

    @property
    def perimeter(self) -> float:
        return self.polygon_perimeter + TWO_PI * self.radius

    def is_full_dimensional(self) -> bool:
        return self.radius > 0 or self.polygon_area > settings.GEOMETRY_TOL

    # ------------------------------------------------------------------
    # Membership
    # ------------------------------------------------------------------

    def polygon_distance(self, points: np.ndarray) -> np.ndarray:
        P = np.atleast_2d(points)
        V = self.vertices
        if self.k == 1:
            return np.linalg.norm(P - V[0], axis=1)
        best = np.full(len(P), np.inf)
        for e in self.edges:
            d = e.end - e.start
            t = np.clip(((P - e.start) @ d) / (d @ d), 0.0, 1.0)
            best = np.minimum(best, np.linalg.norm(P - (e.start + t[:, None] * d), axis=1))
        if self.k >= 3:
            inside = np.all(
                np.stack([(P - e.start) @ e.normal <= 0 for e in self.edges], axis=1), axis=1
            )
            best = np.where(inside, 0.0, best)
        return best

    def distance(self, points: np.ndarray) -> np.ndarray:
        """Euclidean distance to the body (0 inside)."""
        return np.maximum(self.polygon_distance(points) - self.radius, 0.0)

    def contains(self, points: np.ndarray) -> np.ndarray:
        return self.polygon_distance(points) <= self.radius + settings.GEOMETRY_TOL

    # ------------------------------------------------------------------
    # Quadrature
    # ------------------------------------------------------------------

    def volume_rule(self, order: int, refine: bool = False) -> Tuple[np.ndarray, np.ndarray]:
        """Points and weights covering the body: polygon fan, edge strips, vertex sectors."""
        pts, wts = [], []
        if self.k >= 3:
            c = self.vertices.mean(axis=0)
            for e in self.edges:
                p, w = triangle_rule(c, e.start, e.end, order, refine)
                pts.append(p)
                wts.append(w)
        R = self.radius
        if R > 0:
            u, v, w = square_rule(order, refine)
            for e in self.edges:
                d = e.end - e.start
                pts.append(e.start + u[:, None] * d + (v * R)[:, None] * e.normal)
                wts.append(w * e.length * R)
            for cone in self.cones:
                if cone.span <= 0:
                    continue
                rho = R * u
                theta = cone.theta0 + cone.span * v
                pts.append(cone.vertex + rho[:, None] * unit(theta))
                wts.append(w * R * rho * cone.span)
        if not pts:
            return np.empty((0, 2)), np.empty(0)
        return np.vstack(pts), np.concatenate(wts)

    def edge_rule(self, order: int, refine: bool = False):
        """(points, normals, weights) on the shifted straight parts of the boundary."""
        nodes, weights = gauss_legendre(order, refine)
        pts, nrm, wts = [], [], []
        for e in self.edges:
            start = e.start + self.radius * e.normal
            pts.append(start + nodes[:, None] * (e.end - e.start))
            nrm.append(np.repeat(e.normal[None, :], len(nodes), axis=0))
            wts.append(weights * e.length)
        if not pts:
            return np.empty((0, 2)), np.empty((0, 2)), np.empty(0)
        return np.vstack(pts), np.vstack(nrm), np.concatenate(wts)

    def arc_rule(self, order: int, refine: bool = False, breakpoints=()):
        """(points, normals, weights) on the circular parts, split at angular breakpoints."""
        pts, nrm, wts = [], [], []
        if self.radius <= 0:
            return np.empty((0, 2)), np.empty((0, 2)), np.empty(0)
        for cone in self.cones:
            if cone.span <= 0:
                continue
            cuts = _lift_breakpoints(breakpoints, cone.theta0, cone.theta1)
            theta, w = interval_rule(cone.theta0, cone.theta1, order, cuts, refine)
            u = unit(theta)
            pts.append(cone.vertex + self.radius * u)
            nrm.append(u)
            wts.append(w * self.radius)
        if not pts:
            return np.empty((0, 2)), np.empty((0, 2)), np.empty(0)
        return np.vstack(pts), np.vstack(nrm), np.concatenate(wts)

    def boundary_rule(self, order: int, refine: bool = False, breakpoints=()):
        """Edge rule followed by arc rule: (points, normals, weights)."""
        parts = [self.edge_rule(order, refine), self.arc_rule(order, refine, breakpoints)]
        return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))


def _lift_breakpoints(breakpoints, theta0: float, theta1: float) -> List[float]:
    """Angular breakpoints shifted into the window [theta0, theta1]."""
    out = []
    for b in breakpoints:
        t = theta0 + math.fmod(b - theta0 + 4 * TWO_PI, TWO_PI)
        if theta0 < t < theta1:
            out.append(t)
    return out


# ----------------------------------------------------------------------
# Construction
# ----------------------------------------------------------------------


def planar_body(body) -> PlanarBody:
    """Write a planar body exactly as conv(V) + R * B_2^2.

    Raises:
        DimensionMismatch: if the body does not live in R^2
    """
    if body.dim != 2:
        raise DimensionMismatch(f"Planar decomposition needs a body in R^2, got R^{body.dim}")
    geometry.require_bounded(body)
    points = np.zeros((1, 2))
    radius = 0.0
    if isinstance(body, ScaledSum):
        terms = [(t.scale, t.body) for t in geometry._flatten(body).terms]
    else:
        terms = [(1.0, body)]
    for s, b in terms:
        if isinstance(b, Ball):
            points = points + s * np.asarray(b.center, dtype=float)
            radius += s * b.radius
        else:
            points = geometry._sum_point_sets(points, s * geometry._raw_points(b))
    V = geometry.canonical_vertices(points)
    return PlanarBody(vertices=V, radius=radius, name=body.name)


planar_decomposition = planar_body


# ----------------------------------------------------------------------
# Exact polygon moments
# ----------------------------------------------------------------------

_GREEN_ORDER = 8


def polygon_monomial_integral(V: np.ndarray, a: int, b: int) -> float:
    """Integral of x^a y^b over a counter-clockwise polygon, via Green's theorem.

    The area integral equals the boundary integral of x^{a+1} y^b / (a+1) dy, a polynomial of degree
    a + b + 1 along each edge, integrated exactly by Gauss-Legendre.
    """
    if a + b > 2 * _GREEN_ORDER - 2:
        raise ValueError("Monomial degree too high for the exact edge rule")
    V = np.asarray(V, dtype=float)
    if len(V) < 3:
        return 0.0
    nodes, weights = gauss_legendre(_GREEN_ORDER)
    total = 0.0
    for i in range(len(V)):
        p, q = V[i], V[(i + 1) % len(V)]
        pts = p + nodes[:, None] * (q - p)
        total += float(np.sum(weights * pts[:, 0] ** (a + 1) * pts[:, 1] ** b)) * (q[1] - p[1])
    return total / (a + 1)


def polygon_radial_power_integral(V: np.ndarray, p: int) -> float:
    """Integral of |x|^p (p even) over a polygon by binomial expansion of (x^2 + y^2)^{p/2}."""
    if p % 2:
        raise ValueError("Exact radial power integration needs an even exponent")
    m = p // 2
    return float(sum(comb(m, j, exact=True) * polygon_monomial_integral(V, 2 * j, 2 * (m - j)) for j in range(m + 1)))
