"""
Convex body geometry: support functions, canonical vertex sets, Minkowski
sums and structural predicates.

All bodies are immutable pydantic models; every function here is pure.
"""

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError
from scipy.special import ndtri
from scipy.stats import qmc

from wbm.config import settings
from wbm.exceptions import DimensionMismatch, OriginNotContained, UnboundedBody, UnsupportedRepresentation
from wbm.models.bodies import Ball, Polytope, ScaledSum, Segment, SumTerm, Zonotope
from wbm.services.quadrature import simplex_measure

logger = structlog.get_logger(__name__)


# ----------------------------------------------------------------------
# Support function
# ----------------------------------------------------------------------


def _directions(body, u) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[1] != body.dim:
        raise DimensionMismatch(
            f"Direction has dimension {arr.shape[1]}, body lives in R^{body.dim}",
            direction_dim=arr.shape[1],
            body_dim=body.dim,
        )
    return arr, single


def support(body, u):
    """h_K(u) = sup over K of <y, u>; vectorized over rows of u."""
    U, single = _directions(body, u)
    values = _support(body, U)
    return float(values[0]) if single else values


def _support(body, U: np.ndarray) -> np.ndarray:
    if isinstance(body, Polytope):
        return np.max(U @ np.asarray(body.vertices, dtype=float).T, axis=1)
    if isinstance(body, Zonotope):
        c = np.asarray(body.center, dtype=float)
        out = U @ c
        if body.generators:
            out = out + np.sum(np.abs(U @ np.asarray(body.generators, dtype=float).T), axis=1)
        return out
    if isinstance(body, Ball):
        c = np.asarray(body.center, dtype=float)
        return U @ c + body.radius * np.linalg.norm(U, axis=1)
    if isinstance(body, Segment):
        return np.maximum(U @ np.asarray(body.a, dtype=float), U @ np.asarray(body.b, dtype=float))
    if isinstance(body, ScaledSum):
        total = np.zeros(U.shape[0])
        for term in body.terms:
            if term.scale:
                total = total + term.scale * _support(term.body, U)
        return total
    raise TypeError(f"Unknown body type {type(body).__name__}")


def support_point(body, u) -> np.ndarray:
    """A point of the face F(K, u); the face midpoint when the face is a segment.

    This is the gradient of h_K at u wherever h_K is differentiable.
    """
    U, single = _directions(body, u)
    points = np.stack([_support_point(body, row) for row in U])
    return points[0] if single else points


def _support_point(body, u: np.ndarray) -> np.ndarray:
    tol = settings.GEOMETRY_TOL
    if isinstance(body, Polytope):
        V = np.asarray(body.vertices, dtype=float)
        scores = V @ u
        best = scores.max()
        face = V[scores >= best - tol * max(1.0, abs(best), np.linalg.norm(u))]
        return _face_midpoint(face, u)
    if isinstance(body, Zonotope):
        c = np.asarray(body.center, dtype=float)
        if not body.generators:
            return c
        G = np.asarray(body.generators, dtype=float)
        dots = G @ u
        scale = np.linalg.norm(G, axis=1) * max(np.linalg.norm(u), 1e-300)
        signs = np.where(np.abs(dots) <= tol * scale, 0.0, np.sign(dots))
        return c + signs @ G
    if isinstance(body, Ball):
        c = np.asarray(body.center, dtype=float)
        norm = np.linalg.norm(u)
        return c if norm == 0 else c + body.radius * u / norm
    if isinstance(body, Segment):
        a, b = np.asarray(body.a, dtype=float), np.asarray(body.b, dtype=float)
        da, db = a @ u, b @ u
        if abs(da - db) <= tol * max(1.0, np.linalg.norm(b - a) * np.linalg.norm(u)):
            return 0.5 * (a + b)
        return a if da > db else b
    if isinstance(body, ScaledSum):
        return sum(t.scale * _support_point(t.body, u) for t in body.terms)
    raise TypeError(f"Unknown body type {type(body).__name__}")


def _face_midpoint(face: np.ndarray, u: np.ndarray) -> np.ndarray:
    if len(face) == 1:
        return face[0]
    if face.shape[1] == 2:
        # planar face is a segment: average its two extreme endpoints
        t = np.array([-u[1], u[0]])
        proj = face @ t
        return 0.5 * (face[np.argmin(proj)] + face[np.argmax(proj)])
    return face.mean(axis=0)


# ----------------------------------------------------------------------
# Direction nets
# ----------------------------------------------------------------------


@lru_cache(maxsize=32)
def _direction_net(n: int, size: int) -> np.ndarray:
    if n == 1:
        return np.array([[-1.0], [1.0]])
    if n == 2:
        theta = 2.0 * np.pi * np.arange(size) / size
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    m = int(np.ceil(np.log2(max(size, 2))))
    pts = qmc.Sobol(d=n, scramble=False).random_base2(m=m)[1:]
    z = ndtri(np.clip(pts, 1e-12, 1 - 1e-12))
    z = z / np.linalg.norm(z, axis=1, keepdims=True)
    axes = np.vstack([np.eye(n), -np.eye(n)])
    return np.vstack([axes, z])


def direction_net(n: int, size: Optional[int] = None) -> np.ndarray:
    """Unit directions: uniform angles in the plane, a Sobol net otherwise."""
    net = _direction_net(n, size or settings.DIRECTION_NET_SIZE)
    return net.copy()


# ----------------------------------------------------------------------
# Vertex sets
# ----------------------------------------------------------------------


def dedup(points: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Drop points within ``tol`` (max-norm) of an earlier kept point."""
    tol = settings.DEDUP_TOL if tol is None else tol
    points = np.asarray(points, dtype=float)
    order = np.lexsort(points.T[::-1])
    kept: List[np.ndarray] = []
    for p in points[order]:
        if not kept or np.min(np.max(np.abs(np.asarray(kept) - p), axis=1)) > tol:
            kept.append(p)
    return np.array(kept)


def affine_frame(points: np.ndarray, tol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Origin and orthonormal basis (rows) of the affine hull of ``points``."""
    tol = settings.GEOMETRY_TOL if tol is None else tol
    origin = points.mean(axis=0)
    centered = points - origin
    if len(points) == 1:
        return origin, np.zeros((0, points.shape[1]))
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    scale = max(1.0, float(np.max(np.abs(points))))
    rank = int(np.sum(s > tol * scale))
    return origin, vt[:rank]


def _hull_indices(points: np.ndarray) -> np.ndarray:
    try:
        return ConvexHull(points).vertices
    except QhullError:
        logger.debug("qhull_retry_joggle", npoints=len(points))
        return ConvexHull(points, qhull_options="QJ").vertices


def _extreme_by_lp(points: np.ndarray) -> np.ndarray:
    """Indices of extreme points, one feasibility LP per point."""
    keep = []
    for i in range(len(points)):
        others = np.delete(points, i, axis=0)
        m = len(others)
        res = linprog(
            np.zeros(m),
            A_eq=np.vstack([others.T, np.ones((1, m))]),
            b_eq=np.concatenate([points[i], [1.0]]),
            bounds=[(0, None)] * m,
            method="highs",
        )
        if res.status != 0:
            keep.append(i)
    return np.array(keep, dtype=int)


def canonical_vertices(points) -> np.ndarray:
    """Extreme points of conv(points).

    Planar full-dimensional output is counter-clockwise from the
    lexicographically smallest vertex; every other case is sorted
    lexicographically.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if not np.all(np.isfinite(pts)):
        raise UnboundedBody("Vertex coordinates must be finite")
    pts = dedup(pts)
    n = pts.shape[1]
    origin, basis = affine_frame(pts)
    rank = basis.shape[0]

    if rank == 0:
        return pts[:1]
    if rank == 1:
        t = (pts - origin) @ basis[0]
        ext = pts[[int(np.argmin(t)), int(np.argmax(t))]]
        return ext[np.lexsort(ext.T[::-1])]

    local = (pts - origin) @ basis.T if rank < n else pts
    if rank <= settings.MAX_EXACT_HULL_DIM:
        idx = _hull_indices(local)
    else:
        idx = _extreme_by_lp(local)
    ext = pts[idx]

    if n == 2 and rank == 2:
        # ConvexHull already returns planar vertices counter-clockwise
        start = int(np.lexsort(ext.T[::-1])[0])
        return np.roll(ext, -start, axis=0)
    return ext[np.lexsort(ext.T[::-1])]


def _raw_points(body) -> Optional[np.ndarray]:
    """Finite point set whose hull is the body, or None for curved bodies."""
    if isinstance(body, Polytope):
        return np.asarray(body.vertices, dtype=float)
    if isinstance(body, Segment):
        return np.asarray([body.a, body.b], dtype=float)
    if isinstance(body, Ball):
        return np.asarray([body.center], dtype=float) if body.radius == 0 else None
    if isinstance(body, Zonotope):
        c = np.asarray(body.center, dtype=float)[None, :]
        segments = [np.stack([-np.asarray(g), np.asarray(g)]) for g in body.generators]
        return reduce(_sum_point_sets, segments, c)
    if isinstance(body, ScaledSum):
        acc = np.zeros((1, body.dim))
        for term in body.terms:
            pts = _raw_points(term.body)
            if pts is None:
                if term.scale == 0:
                    continue
                return None
            acc = _sum_point_sets(acc, term.scale * pts)
        return acc
    raise TypeError(f"Unknown body type {type(body).__name__}")


def _sum_point_sets(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    P = canonical_vertices(P)
    Q = canonical_vertices(Q)
    if P.shape[1] == 2 and len(P) >= 3 and len(Q) >= 3:
        return _planar_edge_merge(P, Q)
    return canonical_vertices((P[:, None, :] + Q[None, :, :]).reshape(-1, P.shape[1]))


def _planar_edge_merge(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Minkowski sum of two CCW convex polygons by merging edges by angle."""

    def bottom_first(V):
        start = int(np.lexsort((V[:, 0], V[:, 1]))[0])
        return np.roll(V, -start, axis=0)

    P, Q = bottom_first(P), bottom_first(Q)
    ep = np.roll(P, -1, axis=0) - P
    eq = np.roll(Q, -1, axis=0) - Q
    i = j = 0
    out = [P[0] + Q[0]]
    while i < len(ep) or j < len(eq):
        if j >= len(eq):
            step = ep[i]
            i += 1
        elif i >= len(ep):
            step = eq[j]
            j += 1
        else:
            cross = ep[i][0] * eq[j][1] - ep[i][1] * eq[j][0]
            if cross > 0:
                step = ep[i]
                i += 1
            elif cross < 0:
                step = eq[j]
                j += 1
            else:
                step = ep[i] + eq[j]
                i += 1
                j += 1
        out.append(out[-1] + step)
    return canonical_vertices(np.array(out[:-1]))


def vertices(body) -> Optional[np.ndarray]:
    """Canonical vertex array when the body is polytopal, else None."""
    pts = _raw_points(body)
    return None if pts is None else canonical_vertices(pts)


def is_polytopal(body) -> bool:
    return _raw_points(body) is not None


def canonicalize(body):
    """Canonical form: explicit Polytope for polytopal bodies, flattened sums otherwise."""
    V = vertices(body)
    if V is not None:
        return Polytope.from_points(V, name=body.name)
    if isinstance(body, ScaledSum):
        return _flatten(body)
    return body


# ----------------------------------------------------------------------
# Constructions
# ----------------------------------------------------------------------


def _check_same_dim(K, L) -> None:
    if K.dim != L.dim:
        raise DimensionMismatch(f"Bodies live in R^{K.dim} and R^{L.dim}", dims=[K.dim, L.dim])


def _flatten(body) -> ScaledSum:
    terms: List[SumTerm] = []

    def visit(b, s):
        if isinstance(b, ScaledSum):
            for t in b.terms:
                visit(t.body, s * t.scale)
        elif s > 0:
            terms.append(SumTerm(scale=s, body=b))

    visit(body, 1.0)
    if not terms:
        terms.append(SumTerm(scale=1.0, body=Polytope.from_points(np.zeros((1, body.dim)))))
    return ScaledSum(terms=tuple(terms), name=body.name)


def minkowski_sum(K, L):
    """K + L: explicit Polytope when both are polytopal, Ball for two balls, else a flat ScaledSum."""
    _check_same_dim(K, L)
    PK, PL = _raw_points(K), _raw_points(L)
    if PK is not None and PL is not None:
        return Polytope.from_points(_sum_point_sets(PK, PL))
    if isinstance(K, Ball) and isinstance(L, Ball):
        return Ball(
            center=tuple(np.add(K.center, L.center).tolist()),
            radius=K.radius + L.radius,
        )
    return _flatten(ScaledSum(terms=(SumTerm(scale=1.0, body=K), SumTerm(scale=1.0, body=L))))


def scale(body, t: float):
    """The dilate t*K for t >= 0."""
    if t < 0:
        raise ValueError("Dilation factor must be nonnegative")
    if isinstance(body, Polytope):
        return Polytope.from_points(t * np.asarray(body.vertices), name=body.name)
    if isinstance(body, Zonotope):
        if t == 0:
            return Polytope.from_points(np.zeros((1, body.dim)), name=body.name)
        return Zonotope(
            center=tuple((t * np.asarray(body.center)).tolist()),
            generators=tuple(tuple((t * np.asarray(g)).tolist()) for g in body.generators),
            name=body.name,
        )
    if isinstance(body, Ball):
        return Ball(center=tuple((t * np.asarray(body.center)).tolist()), radius=t * body.radius, name=body.name)
    if isinstance(body, Segment):
        a = tuple((t * np.asarray(body.a)).tolist())
        b = tuple((t * np.asarray(body.b)).tolist())
        return Segment(a=a, b=b, name=body.name)
    if isinstance(body, ScaledSum):
        return ScaledSum(terms=tuple(SumTerm(scale=s.scale * t, body=s.body) for s in body.terms), name=body.name)
    raise TypeError(f"Unknown body type {type(body).__name__}")


def translate(body, x: Sequence[float]):
    """K + x."""
    x = np.asarray(x, dtype=float)
    if len(x) != body.dim:
        raise DimensionMismatch("Translation vector dimension differs from body dimension")
    return minkowski_sum(body, Polytope.from_points(x[None, :]))


def minkowski_combination(terms: Iterable[Tuple[float, object]]):
    """sum_i s_i K_i for nonnegative s_i."""
    parts = [scale(body, s) for s, body in terms]
    return reduce(minkowski_sum, parts)


# ----------------------------------------------------------------------
# Predicates
# ----------------------------------------------------------------------


def _span_directions(body) -> np.ndarray:
    n = body.dim
    if isinstance(body, Polytope):
        V = np.asarray(body.vertices, dtype=float)
        return V - V[0]
    if isinstance(body, Segment):
        return (np.asarray(body.b) - np.asarray(body.a))[None, :].astype(float)
    if isinstance(body, Ball):
        return np.eye(n) if body.radius > 0 else np.zeros((1, n))
    if isinstance(body, Zonotope):
        return np.asarray(body.generators, dtype=float) if body.generators else np.zeros((1, n))
    if isinstance(body, ScaledSum):
        return np.vstack([_span_directions(t.body) for t in body.terms if t.scale > 0] or [np.zeros((1, n))])
    raise TypeError(f"Unknown body type {type(body).__name__}")


def affine_dimension(body) -> int:
    """Dimension of the affine hull of the body."""
    D = _span_directions(body)
    if not np.any(D):
        return 0
    s = np.linalg.svd(D, compute_uv=False)
    scale = max(1.0, float(np.max(np.abs(D))))
    return int(np.sum(s > settings.GEOMETRY_TOL * scale))


def full_dimensional(body) -> bool:
    """Whether the body has nonempty interior."""
    return affine_dimension(body) == body.dim


def is_bounded(body) -> bool:
    if isinstance(body, Ball):
        return np.isfinite(body.radius) and np.all(np.isfinite(body.center))
    if isinstance(body, Polytope):
        return bool(np.all(np.isfinite(body.vertices)))
    if isinstance(body, Zonotope):
        return bool(np.all(np.isfinite(body.center)) and np.all(np.isfinite(np.asarray(body.generators, dtype=float))))
    if isinstance(body, Segment):
        return bool(np.all(np.isfinite(body.a)) and np.all(np.isfinite(body.b)))
    if isinstance(body, ScaledSum):
        return all(is_bounded(t.body) for t in body.terms)
    return False


def require_bounded(body) -> None:
    if not is_bounded(body):
        raise UnboundedBody("Body has non-finite coordinates or radius")


def _point_in_hull(V: np.ndarray, x: np.ndarray) -> bool:
    m = len(V)
    res = linprog(
        np.zeros(m),
        A_eq=np.vstack([V.T, np.ones((1, m))]),
        b_eq=np.concatenate([x, [1.0]]),
        bounds=[(0, None)] * m,
        method="highs",
    )
    return res.status == 0


def contains_point(body, x: Sequence[float]) -> bool:
    """Membership of a single point, exact for polytopal bodies and balls."""
    x = np.asarray(x, dtype=float)
    tol = settings.GEOMETRY_TOL
    if isinstance(body, Ball):
        return np.linalg.norm(x - np.asarray(body.center)) <= body.radius + tol
    if isinstance(body, Zonotope):
        c = np.asarray(body.center, dtype=float)
        if not body.generators:
            return np.max(np.abs(x - c)) <= tol
        G = np.asarray(body.generators, dtype=float).T
        res = linprog(np.zeros(G.shape[1]), A_eq=G, b_eq=x - c, bounds=[(-1, 1)] * G.shape[1], method="highs")
        return res.status == 0
    V = vertices(body)
    if V is not None:
        return _point_in_hull(V, x)
    if body.dim == 2:
        from wbm.services.planar import planar_body

        return bool(planar_body(body).distance(x[None, :])[0] <= tol)
    net = direction_net(body.dim, settings.SUPPORT_NET_SIZE)
    return bool(np.all(net @ x <= _support(body, net) + tol))


def contains_origin(body) -> bool:
    """Whether 0 belongs to the body."""
    return contains_point(body, np.zeros(body.dim))


def contains(K, L) -> bool:
    """Certify L subset K: vertices of polytopal L inside K, else h_L <= h_K on a net."""
    _check_same_dim(K, L)
    VL = vertices(L)
    if VL is not None and (vertices(K) is not None or isinstance(K, Ball)):
        return all(contains_point(K, v) for v in VL)
    net = direction_net(K.dim)
    return bool(np.all(_support(L, net) <= _support(K, net) + settings.GEOMETRY_TOL))


def is_symmetric_about(body, x: Sequence[float]) -> bool:
    """Whether K - x = -(K - x)."""
    x = np.asarray(x, dtype=float)
    if len(x) != body.dim:
        raise DimensionMismatch("Center dimension differs from body dimension")
    tol = settings.GEOMETRY_TOL
    if isinstance(body, (Ball, Zonotope)):
        return bool(np.max(np.abs(np.asarray(body.center) - x)) <= tol)
    if isinstance(body, Segment):
        return bool(np.max(np.abs(0.5 * (np.asarray(body.a) + np.asarray(body.b)) - x)) <= tol)
    V = vertices(body)
    if V is not None:
        reflected = 2.0 * x - V
        return all(np.min(np.max(np.abs(V - r), axis=1)) <= max(tol, 10 * settings.DEDUP_TOL) for r in reflected)
    net = direction_net(body.dim)
    lhs = _support(body, net) - net @ x
    rhs = _support(body, -net) + net @ x
    scale = max(1.0, float(np.max(np.abs(lhs))))
    return bool(np.max(np.abs(lhs - rhs)) <= tol * scale)


def symmetry_center(body) -> Optional[np.ndarray]:
    """The center of symmetry, or None if the body is not centrally symmetric."""
    if isinstance(body, (Ball, Zonotope)):
        return np.asarray(body.center, dtype=float)
    if isinstance(body, Segment):
        return 0.5 * (np.asarray(body.a, dtype=float) + np.asarray(body.b, dtype=float))
    if isinstance(body, ScaledSum):
        centers = [symmetry_center(t.body) for t in body.terms]
        if all(c is not None for c in centers):
            return sum(t.scale * c for t, c in zip(body.terms, centers))
    V = vertices(body)
    if V is not None:
        c = V.mean(axis=0)
    else:
        net = direction_net(body.dim)
        # h(u) - h(-u) = 2<c, u> for a symmetric body
        c, *_ = np.linalg.lstsq(net, 0.5 * (_support(body, net) - _support(body, -net)), rcond=None)
    return c if is_symmetric_about(body, c) else None


def is_symmetric(body) -> bool:
    """Origin-symmetric."""
    return is_symmetric_about(body, np.zeros(body.dim))


# ----------------------------------------------------------------------
# Zonotope decomposition
# ----------------------------------------------------------------------


def zonotope_origin_decomposition(Z: Zonotope) -> List[Segment]:
    """Segments [0, v_i] whose Minkowski sum is Z.

    Solves c + G t = 0 with t in [-1, 1]^m (maximizing the distance to the
    box boundary), then splits each shifted generating segment at the origin.

    Raises:
        OriginNotContained: if the feasibility problem is infeasible
    """
    c = np.asarray(Z.center, dtype=float)
    n = len(c)
    net = direction_net(n)
    if np.min(_support(Z, net)) < -settings.GEOMETRY_TOL:
        raise OriginNotContained("Zonotope does not contain the origin (support test)")
    if not Z.generators:
        if np.max(np.abs(c)) > settings.GEOMETRY_TOL:
            raise OriginNotContained("Point zonotope away from the origin")
        return []

    G = np.asarray(Z.generators, dtype=float).T
    m = G.shape[1]
    # variables (t_1..t_m, s): maximize s with -1 + s <= t_i <= 1 - s
    cost = np.zeros(m + 1)
    cost[-1] = -1.0
    A_ub = np.vstack(
        [
            np.hstack([np.eye(m), np.ones((m, 1))]),
            np.hstack([-np.eye(m), np.ones((m, 1))]),
        ]
    )
    b_ub = np.ones(2 * m)
    A_eq = np.hstack([G, np.zeros((n, 1))])
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=-c, bounds=[(-1, 1)] * m + [(0, 1)], method="highs")
    if res.status != 0:
        raise OriginNotContained("Zonotope does not contain the origin (infeasible)", status=int(res.status))

    t = np.clip(res.x[:m], -1.0, 1.0)
    for _ in range(3):
        residual = c + G @ t
        if np.max(np.abs(residual)) == 0:
            break
        correction, *_ = np.linalg.lstsq(G, -residual, rcond=None)
        t = np.clip(t + correction, -1.0, 1.0)

    segments: List[Segment] = []
    for ti, g in zip(t, G.T):
        for v in (-(1.0 + ti) * g, (1.0 - ti) * g):
            if np.linalg.norm(v) > settings.DEDUP_TOL:
                segments.append(Segment.from_origin(v.tolist()))
    logger.debug("zonotope_decomposed", generators=m, segments=len(segments))
    return segments


def body_label(body) -> str:
    """Short identifier for reports."""
    if body.name:
        return body.name
    if isinstance(body, Polytope):
        return f"polytope[{len(body.vertices)}]"
    if isinstance(body, Zonotope):
        return f"zonotope[{len(body.generators)}]"
    if isinstance(body, Ball):
        return f"ball(r={body.radius:g})"
    if isinstance(body, Segment):
        return "segment"
    return f"sum[{len(body.terms)}]"


# ----------------------------------------------------------------------
# Hull data
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HullFacet:
    """One facet: outer unit normal, offset b in <normal, x> <= b, and its simplices."""

    normal: np.ndarray
    offset: float
    simplices: np.ndarray
    area: float


@dataclass(frozen=True, eq=False)
class HullData:
    points: np.ndarray
    facets: Tuple[HullFacet, ...]
    volume: float

    @property
    def normals(self) -> np.ndarray:
        return np.array([f.normal for f in self.facets])

    @property
    def offsets(self) -> np.ndarray:
        return np.array([f.offset for f in self.facets])

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        """H-representation membership test."""
        return np.all(np.atleast_2d(points) @ self.normals.T <= self.offsets + tol, axis=1)


@lru_cache(maxsize=256)
def _hull_data(key: bytes, shape: Tuple[int, int]) -> HullData:
    V = np.frombuffer(key, dtype=float).reshape(shape)
    try:
        hull = ConvexHull(V)
    except QhullError:
        hull = ConvexHull(V, qhull_options="QJ")
    groups: List[List[int]] = []
    normals: List[np.ndarray] = []
    for i, eq in enumerate(hull.equations):
        for g, nrm in enumerate(normals):
            if np.max(np.abs(nrm - eq[:-1])) <= 1e-9:
                groups[g].append(i)
                break
        else:
            normals.append(eq[:-1])
            groups.append([i])
    facets = []
    for nrm, members in zip(normals, groups):
        simplices = hull.points[hull.simplices[members]]
        area = sum(simplex_measure(s[1:] - s[0]) for s in simplices)
        offset = float(np.max(V @ nrm))
        facets.append(HullFacet(normal=nrm / np.linalg.norm(nrm), offset=offset, simplices=simplices, area=area))
    return HullData(points=V, facets=tuple(facets), volume=float(hull.volume))


def hull_data(body) -> HullData:
    """Facets (grouped by normal), areas and volume of a full-dimensional polytopal body.

    Raises:
        UnsupportedRepresentation: for curved, lower-dimensional or too high-dimensional bodies
    """
    V = vertices(body)
    if V is None or body.dim < 2 or body.dim > settings.MAX_EXACT_HULL_DIM or not full_dimensional(body):
        raise UnsupportedRepresentation(
            "Exact hull data needs a full-dimensional polytope of dimension 2..%d" % settings.MAX_EXACT_HULL_DIM,
            dim=body.dim,
        )
    V = np.ascontiguousarray(V, dtype=float)
    return _hull_data(V.tobytes(), V.shape)
