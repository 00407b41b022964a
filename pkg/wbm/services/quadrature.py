"""
Quadrature rules, Richardson extrapolation and randomized QMC point sets.
"""

from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.stats import qmc


@lru_cache(maxsize=64)
def _gauss_legendre_unit(order: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(order)
    nodes, weights = 0.5 * (x + 1.0), 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(order: int, refine: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]; ``refine`` splits into two halves."""
    nodes, weights = _gauss_legendre_unit(order)
    if not refine:
        return nodes, weights
    return np.concatenate([0.5 * nodes, 0.5 + 0.5 * nodes]), np.concatenate([0.5 * weights, 0.5 * weights])


def interval_rule(a: float, b: float, order: int, breakpoints: Sequence[float] = (), refine: bool = False):
    """Composite Gauss-Legendre rule on [a, b], split at interior breakpoints."""
    cuts = sorted({a, b, *(t for t in breakpoints if a < t < b)})
    nodes, weights = gauss_legendre(order, refine)
    xs, ws = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - lo <= 0:
            continue
        xs.append(lo + (hi - lo) * nodes)
        ws.append((hi - lo) * weights)
    if not xs:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs), np.concatenate(ws)


def square_rule(order: int, refine: bool = False) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tensor Gauss-Legendre rule on [0,1]^2: (u, v, weights)."""
    nodes, weights = gauss_legendre(order, refine)
    u, v = np.meshgrid(nodes, nodes, indexing="ij")
    w = np.outer(weights, weights)
    return u.ravel(), v.ravel(), w.ravel()


def cube_rule(order: int, refine: bool = False):
    nodes, weights = gauss_legendre(order, refine)
    u, v, s = np.meshgrid(nodes, nodes, nodes, indexing="ij")
    w = weights[:, None, None] * weights[None, :, None] * weights[None, None, :]
    return u.ravel(), v.ravel(), s.ravel(), w.ravel()


def triangle_rule(p0, p1, p2, order: int, refine: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Collapsed (Duffy) tensor rule on a triangle embedded in R^n.

    Exact for polynomials of degree <= 2*order - 2.
    """
    p0, p1, p2 = (np.asarray(p, dtype=float) for p in (p0, p1, p2))
    u, v, w = square_rule(order, refine)
    e1, e2 = p1 - p0, p2 - p1
    points = p0 + u[:, None] * (e1 + v[:, None] * e2)
    area = simplex_measure(np.stack([e1, p2 - p0]))
    return points, w * u * 2.0 * area


def tetra_rule(p0, p1, p2, p3, order: int, refine: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Collapsed tensor rule on a tetrahedron in R^3.

    Exact for polynomials of degree <= 2*order - 3.
    """
    p0, p1, p2, p3 = (np.asarray(p, dtype=float) for p in (p0, p1, p2, p3))
    u, v, s, w = cube_rule(order, refine)
    points = p0 + u[:, None] * ((p1 - p0) + v[:, None] * ((p2 - p1) + s[:, None] * (p3 - p2)))
    volume = abs(np.linalg.det(np.stack([p1 - p0, p2 - p0, p3 - p0]))) / 6.0
    return points, w * u * u * v * 6.0 * volume


def simplex_measure(edges: np.ndarray) -> float:
    """k-volume of the simplex spanned by the rows of ``edges``."""
    k = edges.shape[0]
    gram = edges @ edges.T
    return float(np.sqrt(max(np.linalg.det(gram), 0.0))) / float(np.prod(np.arange(1, k + 1)))


def sphere_rule_3d(order: int, refine: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Product rule on S^2: Gauss-Legendre in z, trapezoid in azimuth."""
    z, wz = interval_rule(-1.0, 1.0, order, refine=refine)
    m = 2 * order * (2 if refine else 1)
    phi = 2.0 * np.pi * np.arange(m) / m
    zz, pp = np.meshgrid(z, phi, indexing="ij")
    rho = np.sqrt(np.clip(1.0 - zz**2, 0.0, None))
    points = np.stack([rho * np.cos(pp), rho * np.sin(pp), zz], axis=-1).reshape(-1, 3)
    weights = (wz[:, None] * np.full(m, 2.0 * np.pi / m)[None, :]).ravel()
    return points, weights


# ----------------------------------------------------------------------
# Richardson extrapolation
# ----------------------------------------------------------------------


def richardson_extrapolate(base_values: Sequence[float], p: float = 1.0, r: float = 2.0) -> float:
    """Richardson extrapolation for errors of orders p, 2p, 3p, ...

    Args:
        base_values: Estimates at steps h, h/r, h/r^2, ... (coarse to fine)
        p: Leading error order
        r: Step ratio between successive levels

    Returns:
        The extrapolated estimate.
    """
    n = len(base_values)
    if n < 2:
        raise ValueError("richardson_extrapolate requires at least two base values.")
    vals = [float(v) for v in base_values]
    for j in range(1, n):
        factor = r ** (p * j)
        for k in range(n - 1, j - 1, -1):
            vals[k] = (factor * vals[k] - vals[k - 1]) / (factor - 1.0)
    return vals[-1]


@lru_cache(maxsize=32)
def richardson_weights(n: int, p: float = 1.0, r: float = 2.0) -> Tuple[float, ...]:
    """Linear weights c with richardson_extrapolate(q) == c . q."""
    return tuple(richardson_extrapolate(np.eye(n)[i], p, r) for i in range(n))


# ----------------------------------------------------------------------
# Randomized quasi-Monte-Carlo
# ----------------------------------------------------------------------


def sobol_replicates(dim: int, log2_points: int, replicates: int, seed) -> List[np.ndarray]:
    """Cranley-Patterson shifted copies of one Sobol net in [0,1)^dim."""
    base = qmc.Sobol(d=dim, scramble=False).random_base2(m=log2_points)
    rng = np.random.default_rng(seed)
    shifts = rng.random((replicates, dim))
    return [np.mod(base + shift, 1.0) for shift in shifts]
