"""
First- and second-order mixed measures.

Two independent routes: one-sided finite differences of mu(K + eps L) with
Richardson extrapolation, and representation formulas integrating support
functions against (mixed) weighted surface measures.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from wbm.config import settings
from wbm.exceptions import Inconclusive, UnsupportedConfiguration, UnsupportedRepresentation
from wbm.models.bodies import Ball, Segment
from wbm.models.results import EvalMethod, EvalResult
from wbm.models.schedule import FDSchedule
from wbm.monitoring.verdicts import InequalityReport, Relation
from wbm.services import geometry
from wbm.services.measures import measure
from wbm.services.quadrature import interval_rule, richardson_weights, sobol_replicates, square_rule
from wbm.services.surface import support_breakpoints, weighted_mixed_surface_measure, weighted_surface_measure

logger = structlog.get_logger(__name__)

_EPS = float(np.finfo(float).eps)


# ----------------------------------------------------------------------
# Richardson engine
# ----------------------------------------------------------------------


@dataclass
class FDEstimate:
    """Outcome of one extrapolated difference-quotient computation."""

    result: EvalResult
    quotients: List[float]
    extrapolants: List[float]
    window: int
    two_sided_gap: Optional[float] = None
    agrees: bool = True
    details: dict = field(default_factory=dict)


class FDEngine:
    """Richardson extrapolation of difference quotients on a geometric schedule.

    Windows of ``schedule.extrapolation`` consecutive levels are extrapolated
    assuming an error expansion in integer powers of eps; the window with the
    smallest change to its successor is kept.
    """

    def __init__(self, schedule: Optional[FDSchedule] = None):
        self.schedule = schedule or FDSchedule.default()

    def extrapolate(self, quotients: Sequence[EvalResult], rounding: Sequence[float]) -> FDEstimate:
        """
        Extrapolate quotients computed at the schedule's epsilons.

        Args:
            quotients: Difference quotients, coarse to fine, with propagated errors
            rounding: Cancellation error floor of each quotient

        Returns:
            FDEstimate whose result carries spread plus propagated error

        Raises:
            Inconclusive: if successive extrapolants fail to contract above the noise floor
        """
        m = min(self.schedule.extrapolation, len(quotients))
        r = self.schedule.ratio
        values = [q.value for q in quotients]
        errors = [q.abs_error + rnd for q, rnd in zip(quotients, rounding)]
        if m < 2:
            return self._single(values, errors)

        c = np.asarray(richardson_weights(m, 1.0, r))
        windows = len(values) - m + 1
        ext = [float(c @ values[j : j + m]) for j in range(windows)]
        noise = [float(np.abs(c) @ errors[j : j + m]) for j in range(windows)]

        if windows == 1:
            spread = abs(ext[0] - values[-1])
            return self._finish(ext[0], spread, noise[0], values, ext, 0)

        diffs = [abs(b - a) for a, b in zip(ext, ext[1:])]
        best = int(np.argmin(diffs))
        floor = settings.VERDICT_SIGMA * max(noise[best], noise[best + 1])
        if len(diffs) >= 2 and min(diffs[1:]) >= diffs[0] and diffs[0] > floor:
            logger.debug("fd_no_contraction", diffs=diffs, noise=noise)
            raise Inconclusive(
                "Richardson extrapolants did not contract",
                diffs=[float(d) for d in diffs],
            )
        estimate = self._finish(ext[best + 1], diffs[best], max(noise[best], noise[best + 1]), values, ext, best + 1)

        if self.schedule.two_sided and windows >= 2:
            gap = abs(ext[-1] - ext[0])
            allowed = settings.VERDICT_SIGMA * (estimate.result.abs_error + noise[0] + noise[-1])
            estimate.two_sided_gap = gap
            estimate.agrees = gap <= allowed + diffs[0]
            if not estimate.agrees:
                logger.debug("fd_two_sided_disagreement", gap=gap, allowed=allowed)
        return estimate

    def _single(self, values, errors) -> FDEstimate:
        spread = abs(values[-1] - values[-2]) if len(values) > 1 else 0.0
        return self._finish(values[-1], spread, errors[-1], values, list(values), len(values) - 1)

    @staticmethod
    def _finish(value, spread, noise, values, ext, window) -> FDEstimate:
        err = spread + noise + 64 * _EPS * abs(value)
        result = EvalResult.estimate(value, err, EvalMethod.FD_EXTRAPOLATED)
        return FDEstimate(result=result, quotients=list(values), extrapolants=list(ext), window=window)


def _rounding(order: int, eps: float, *terms: EvalResult) -> float:
    """Cancellation error of a difference of measure values divided by eps^order."""
    return 16 * _EPS * sum(abs(t.value) for t in terms) / eps**order


def _combination(K, L, eps: float):
    return geometry.minkowski_sum(K, geometry.scale(L, eps))


# ----------------------------------------------------------------------
# Finite-difference oracles
# ----------------------------------------------------------------------


def mixed1_fd_estimate(mu, K, L, schedule: Optional[FDSchedule] = None, seed=None) -> FDEstimate:
    engine = FDEngine(schedule)
    base = measure(mu, K, seed=seed)
    quotients, rounding = [], []
    for eps in engine.schedule.epsilons:
        shifted = measure(mu, _combination(K, L, eps), seed=seed)
        quotients.append((shifted - base) / eps)
        rounding.append(_rounding(1, eps, shifted, base))
    return engine.extrapolate(quotients, rounding)


def mixed1_fd(mu, K, L, schedule: Optional[FDSchedule] = None, seed=None) -> EvalResult:
    """mu(K;L) = lim (mu(K + eps L) - mu(K)) / eps by extrapolated one-sided quotients."""
    return mixed1_fd_estimate(mu, K, L, schedule, seed).result


def mixed2_fd_estimate(mu, A, B, C, schedule: Optional[FDSchedule] = None, seed=None) -> FDEstimate:
    engine = FDEngine(schedule)
    if engine.schedule.coupling == "product":
        return _mixed2_product(engine, mu, A, B, C, seed)
    base = measure(mu, A, seed=seed)
    quotients, rounding = [], []
    for eps in engine.schedule.epsilons:
        AB = _combination(A, B, eps)
        AC = _combination(A, C, eps)
        ABC = _combination(AB, C, eps)
        terms = [measure(mu, body, seed=seed) for body in (ABC, AB, AC)]
        quotients.append((terms[0] - terms[1] - terms[2] + base) / (eps * eps))
        rounding.append(_rounding(2, eps, *terms, base))
    return engine.extrapolate(quotients, rounding)


def _mixed2_product(engine: FDEngine, mu, A, B, C, seed) -> FDEstimate:
    """(s, t) product grid: extrapolate in t for each s, then in s."""
    eps = engine.schedule.epsilons
    base = measure(mu, A, seed=seed)
    AB = [_combination(A, B, s) for s in eps]
    mAB = [measure(mu, body, seed=seed) for body in AB]
    mAC = [measure(mu, _combination(A, C, t), seed=seed) for t in eps]
    rows, row_rounding = [], []
    for i, s in enumerate(eps):
        quotients, rounding = [], []
        for j, t in enumerate(eps):
            top = measure(mu, _combination(AB[i], C, t), seed=seed)
            quotients.append((top - mAB[i] - mAC[j] + base) / (s * t))
            scale = abs(top.value) + abs(mAB[i].value) + abs(mAC[j].value) + abs(base.value)
            rounding.append(16 * _EPS * scale / (s * t))
        inner = engine.extrapolate(quotients, rounding)
        rows.append(inner.result)
        row_rounding.append(0.0)
    return engine.extrapolate(rows, row_rounding)


def mixed2_fd(mu, A, B, C, schedule: Optional[FDSchedule] = None, seed=None) -> EvalResult:
    """mu(A;B,C) by the extrapolated second mixed difference."""
    return mixed2_fd_estimate(mu, A, B, C, schedule, seed).result


def surface_area_fd(mu, K, schedule: Optional[FDSchedule] = None, seed=None) -> EvalResult:
    """mu^+(boundary K) = mu(K; B_2^n) by finite differences."""
    return mixed1_fd(mu, K, Ball.unit(K.dim), schedule, seed)


# ----------------------------------------------------------------------
# Representation formulas
# ----------------------------------------------------------------------


def _support_fn(body) -> Callable[[np.ndarray], np.ndarray]:
    return lambda U: geometry.support(body, np.atleast_2d(U))


def mixed1_formula(mu, K, L) -> EvalResult:
    """mu(K;L) as the integral of h_L against S^mu_K."""
    geometry._check_same_dim(K, L)
    return weighted_surface_measure(mu, K).integrate(_support_fn(L), support_breakpoints(L))


def mixed2_formula(mu, A, B, C) -> EvalResult:
    """mu(A;B,C) by representation.

    R^1: closed form from the endpoint derivatives of the density. R^2: the
    weighted mixed surface measure of (A, B) integrated against h_C. R^3:
    available when B or C is a segment [0, v] and A is a polytope.

    Raises:
        UnsupportedRepresentation: outside these cases
    """
    geometry._check_same_dim(A, B)
    geometry._check_same_dim(A, C)
    n = A.dim
    if n == 1:
        return _mixed2_interval(mu, A, B, C)
    if n == 3 and not _origin_segment(B) and _origin_segment(C):
        B, C = C, B
    S = weighted_mixed_surface_measure(mu, A, B)
    return S.integrate(_support_fn(C), support_breakpoints(C)) * (n - 1)


def _origin_segment(body) -> bool:
    return isinstance(body, Segment) and (not any(body.a) or not any(body.b))


def _mixed2_interval(mu, A, B, C) -> EvalResult:
    lo = -geometry.support(A, [-1.0])
    hi = geometry.support(A, [1.0])
    d_hi = float(mu.gradient(np.array([[hi]]))[0, 0])
    d_lo = float(mu.gradient(np.array([[lo]]))[0, 0])
    up = geometry.support(B, [1.0]) * geometry.support(C, [1.0])
    down = geometry.support(B, [-1.0]) * geometry.support(C, [-1.0])
    return EvalResult.exact(d_hi * up - d_lo * down)


def mixed2_segment(mu, A, v: Sequence[float], C) -> EvalResult:
    """mu(A;[0,v],C) by the segment representation."""
    return mixed2_formula(mu, A, Segment.from_origin(list(v)), C)


def mixed1(mu, K, L, path: str = "auto", schedule: Optional[FDSchedule] = None, seed=None) -> EvalResult:
    """mu(K;L) via the formula when a representation exists, else by finite differences."""
    if path in ("auto", "formula"):
        try:
            return mixed1_formula(mu, K, L)
        except UnsupportedRepresentation:
            if path == "formula":
                raise
            logger.debug("mixed1_fallback_fd", measure=mu.label(), dim=K.dim)
    return mixed1_fd(mu, K, L, schedule, seed)


def mixed2(mu, A, B, C, path: str = "auto", schedule: Optional[FDSchedule] = None, seed=None) -> EvalResult:
    """mu(A;B,C) via the formula when a representation exists, else by finite differences."""
    if path in ("auto", "formula"):
        try:
            return mixed2_formula(mu, A, B, C)
        except UnsupportedRepresentation:
            if path == "formula":
                raise
            logger.debug("mixed2_fallback_fd", measure=mu.label(), dim=A.dim)
    return mixed2_fd(mu, A, B, C, schedule, seed)


# ----------------------------------------------------------------------
# Disk flux probe
# ----------------------------------------------------------------------


def _orthonormal_complement(v: np.ndarray) -> np.ndarray:
    return np.linalg.svd(v[None, :])[2][1:]


def disk_normal_flux(mu, v: Sequence[float], r: float, x: Sequence[float]) -> EvalResult:
    """Integral of <grad phi, v> over the (n-1)-disk of radius r centered at x normal to v."""
    v = np.asarray(v, dtype=float)
    x = np.asarray(x, dtype=float)
    n = len(v)
    if len(x) != n:
        geometry._check_same_dim(Segment(a=tuple(v), b=tuple(v)), Segment(a=tuple(x), b=tuple(x)))
    mu.check_dim(n)
    v = v / np.linalg.norm(v)
    if mu.is_constant:
        return EvalResult.exact(0.0)
    if n == 1:
        return EvalResult.exact(float(mu.gradient(x[None, :])[0] @ v))
    W = _orthonormal_complement(v)
    order = settings.QUADRATURE_ORDER

    def flux(points, weights) -> float:
        return float(weights @ (mu.gradient(points) @ v))

    if n == 2:
        values = []
        for refine in (False, True):
            s, w = interval_rule(-r, r, order, breakpoints=[0.0], refine=refine)
            values.append(flux(x + s[:, None] * W[0], w))
        return EvalResult.estimate(values[1], max(abs(values[1] - values[0]), 1e-15), EvalMethod.QUADRATURE)
    if n == 3:
        values = []
        for refine in (False, True):
            a, b, w = square_rule(order, refine)
            rho, theta = r * a, 2.0 * math.pi * b
            pts = x + rho[:, None] * (np.cos(theta)[:, None] * W[0] + np.sin(theta)[:, None] * W[1])
            values.append(flux(pts, w * rho * r * 2.0 * math.pi))
        return EvalResult.estimate(values[1], max(abs(values[1] - values[0]), 1e-15), EvalMethod.QUADRATURE)

    # QMC over the bounding cube of the (n-1)-disk
    estimates = []
    for unit_pts in sobol_replicates(n - 1, settings.QMC_LOG2_POINTS, settings.QMC_REPLICATES, settings.SEED):
        local = r * (2.0 * unit_pts - 1.0)
        inside = np.linalg.norm(local, axis=1) <= r
        pts = x + local @ W
        vals = np.where(inside, mu.gradient(pts) @ v, 0.0)
        estimates.append((2.0 * r) ** (n - 1) * float(vals.mean()))
    estimates = np.asarray(estimates)
    return EvalResult.estimate(
        float(estimates.mean()), float(estimates.std(ddof=1) / math.sqrt(len(estimates))), EvalMethod.QMC
    )


# ----------------------------------------------------------------------
# Homogeneity identities
# ----------------------------------------------------------------------

_T_GRID = 33


def _t_rule() -> Tuple[np.ndarray, np.ndarray]:
    return interval_rule(0.0, 1.0, _T_GRID)


def homogeneity_suite(mu, A, B, C, t: float = 0.5, schedule: Optional[FDSchedule] = None) -> List[InequalityReport]:
    """Identity reports for an alpha-homogeneous measure.

    Raises:
        UnsupportedConfiguration: if mu is not homogeneous
    """
    n = A.dim
    alpha = mu.homogeneity_degree(n)
    if alpha is None:
        raise UnsupportedConfiguration(f"{mu.label()} is not homogeneous")
    ids = [geometry.body_label(b) for b in (A, B, C)]
    label = mu.label()

    def report(name, lhs, rhs, bodies):
        return InequalityReport(name=name, lhs=lhs, rhs=rhs, relation=Relation.EQ, measure=label, body_ids=bodies)

    def m1(K, L):
        return mixed1(mu, K, L, schedule=schedule)

    def m2(K, L, M):
        return mixed2(mu, K, L, M, schedule=schedule)

    muA = measure(mu, A)
    tA = geometry.scale(A, t)
    reports = [
        report("homogeneity_mixed1", m1(tA, B), m1(A, B) * t ** (alpha - 1), ids[:2]),
        report("homogeneity_mixed2", m2(tA, B, C), m2(A, B, C) * t ** (alpha - 2), ids),
        report("self_mixed1", m1(A, A), muA * alpha, ids[:1]),
        report("self_mixed2", m2(A, A, C), m1(A, C) * (alpha - 1), [ids[0], ids[2]]),
        report("self_mixed2_full", m2(A, A, A), muA * (alpha * (alpha - 1)), ids[:1]),
    ]

    nodes, weights = _t_rule()
    volume_integral = sum(
        (m1(geometry.scale(A, float(s)), A) * float(w) for s, w in zip(nodes, weights)), EvalResult.exact(0.0)
    )
    reports.append(report("dilation_integral", muA, volume_integral, ids[:1]))
    if n >= 2:
        mixed_integral = sum(
            (m2(geometry.scale(A, float(s)), A, C) * float(w) for s, w in zip(nodes, weights)), EvalResult.exact(0.0)
        )
        reports.append(report("mixed_dilation_integral", m1(A, C), mixed_integral, [ids[0], ids[2]]))
    return reports
