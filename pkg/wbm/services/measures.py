"""
Measure evaluation: mu(K) with an error estimate, exact wherever possible.
"""

import math
from typing import Optional

import numpy as np
import structlog
from scipy.integrate import quad
from scipy.special import gammainc, ndtr

from wbm.config import settings
from wbm.exceptions import UnsupportedRepresentation
from wbm.models.bodies import Ball, ScaledSum
from wbm.models.measures import Gaussian, Lebesgue, RadialExp, RadialPower, ball_volume, sphere_area
from wbm.models.results import EvalMethod, EvalResult
from wbm.services import geometry
from wbm.services.planar import planar_body, polygon_radial_power_integral
from wbm.services.quadrature import interval_rule, sobol_replicates, sphere_rule_3d, tetra_rule

logger = structlog.get_logger(__name__)

_GREEN_MAX_POWER = 6


def _rounding(value: float) -> float:
    return settings.ROUNDING_RTOL * max(abs(value), 1e-300)


def _refined_estimate(coarse: float, fine: float, method: EvalMethod = EvalMethod.QUADRATURE) -> EvalResult:
    return EvalResult.estimate(fine, max(abs(fine - coarse), _rounding(fine)), method)


class MeasureEvaluator:
    """Evaluate mu(K) by strategy dispatch.

    Order of preference: closed forms, exact polygon moments, Gauss
    quadrature on an exact decomposition, and randomized QMC as the fallback.
    """

    def __init__(self):
        self.order = settings.QUADRATURE_ORDER
        self.solid_order = settings.SOLID_QUADRATURE_ORDER

    # ------------------------------------------------------------------
    # Entry point
    # ------------------------------------------------------------------

    def evaluate(self, mu, body, method: Optional[str] = None, seed=None) -> EvalResult:
        """
        Evaluate mu(K).

        Args:
            mu: Measure specification
            body: Bounded convex body
            method: None for automatic dispatch, "qmc" to force the QMC path
            seed: Seed for the QMC shifts; defaults to settings.SEED

        Returns:
            EvalResult with provenance

        Raises:
            UnboundedBody: if the body is not bounded
        """
        n = body.dim
        mu.check_dim(n)
        geometry.require_bounded(body)

        if geometry.affine_dimension(body) < n:
            return EvalResult.exact(0.0)

        if method == "qmc":
            return self.qmc(mu, body, seed)
        if method not in (None, "auto"):
            raise ValueError(f"Unknown measure method {method!r}")

        if n == 1:
            return self.interval(mu, body)

        V = geometry.vertices(body)
        if isinstance(mu, Lebesgue) and V is not None and n <= settings.MAX_EXACT_HULL_DIM:
            return EvalResult.exact(geometry.hull_data(body).volume)

        if isinstance(mu, Gaussian) and V is not None and _is_axis_box(V):
            lo, hi = V.min(axis=0), V.max(axis=0)
            return EvalResult.exact(float(np.prod(ndtr(hi) - ndtr(lo))))

        centered = _centered_ball_radius(body)
        if centered is not None:
            return self.centered_ball(mu, n, centered)

        if n == 2:
            return self.planar(mu, body)
        if n == 3 and V is not None:
            return self.polytope_3d(mu, body)
        if n == 3 and isinstance(body, Ball):
            return self.ball_3d(mu, body)
        logger.debug("measure_dispatch_qmc", measure=mu.label(), dim=n, body=body.type)
        return self.qmc(mu, body, seed)

    # ------------------------------------------------------------------
    # Closed forms
    # ------------------------------------------------------------------

    def interval(self, mu, body) -> EvalResult:
        """mu([lo, hi]) in R^1."""
        lo = -float(geometry.support(body, [-1.0]))
        hi = float(geometry.support(body, [1.0]))
        if isinstance(mu, Lebesgue):
            return EvalResult.exact(hi - lo)
        if isinstance(mu, Gaussian):
            return EvalResult.exact(float(ndtr(hi) - ndtr(lo)))
        if isinstance(mu, RadialPower):
            p = mu.p

            def antiderivative(x):
                return math.copysign(abs(x) ** (p + 1.0) / (p + 1.0), x)

            return EvalResult.exact(antiderivative(hi) - antiderivative(lo))
        if isinstance(mu, RadialExp) and mu.family == "gaussian":
            return EvalResult.exact(math.sqrt(2.0 * math.pi) * float(ndtr(hi) - ndtr(lo)))
        return self._quad_1d(lambda x: float(mu.radial_profile(abs(x), 1)), lo, hi)

    @staticmethod
    def _quad_1d(fn, lo: float, hi: float) -> EvalResult:
        points = [0.0] if lo < 0.0 < hi else None
        value, err = quad(fn, lo, hi, points=points, epsabs=1e-13, epsrel=1e-12, limit=200)
        return EvalResult.estimate(value, max(err, _rounding(value)), EvalMethod.QUADRATURE)

    def centered_ball(self, mu, n: int, R: float) -> EvalResult:
        """mu(R B_2^n) for every radial family."""
        if isinstance(mu, Lebesgue):
            return EvalResult.exact(ball_volume(n) * R**n)
        if isinstance(mu, Gaussian):
            return EvalResult.exact(float(gammainc(n / 2.0, R * R / 2.0)))
        if isinstance(mu, RadialPower):
            return EvalResult.exact(sphere_area(n) * R ** (n + mu.p) / (n + mu.p))
        if isinstance(mu, RadialExp) and mu.family == "gaussian":
            return EvalResult.exact((2.0 * math.pi) ** (n / 2.0) * float(gammainc(n / 2.0, R * R / 2.0)))
        radial = self._quad_1d(lambda r: r ** (n - 1) * float(mu.radial_profile(r, n)), 0.0, R)
        return radial * sphere_area(n)

    # ------------------------------------------------------------------
    # Quadrature paths
    # ------------------------------------------------------------------

    def planar(self, mu, body) -> EvalResult:
        pb = planar_body(body)
        if isinstance(mu, Lebesgue):
            return EvalResult.exact(pb.area)
        degree = mu.polynomial_degree()
        if pb.radius == 0 and isinstance(mu, RadialPower) and degree is not None:
            if degree <= _GREEN_MAX_POWER:
                return EvalResult.exact(polygon_radial_power_integral(pb.vertices, degree))
            if degree <= 2 * self.order - 2:
                pts, w = pb.volume_rule(self.order)
                return EvalResult.exact(float(w @ mu.density(pts)))
        coarse = self._integrate(mu, *pb.volume_rule(self.order))
        fine = self._integrate(mu, *pb.volume_rule(self.order, refine=True))
        return _refined_estimate(coarse, fine)

    @staticmethod
    def _integrate(mu, points: np.ndarray, weights: np.ndarray) -> float:
        if len(weights) == 0:
            return 0.0
        return float(weights @ mu.density(points))

    def polytope_3d(self, mu, body) -> EvalResult:
        """Tetrahedral Gauss rule on the cone decomposition from the vertex centroid."""
        data = geometry.hull_data(body)
        c = data.points.mean(axis=0)

        def run(refine: bool) -> float:
            total = 0.0
            for facet in data.facets:
                for tri in facet.simplices:
                    pts, w = tetra_rule(c, tri[0], tri[1], tri[2], self.solid_order, refine)
                    total += float(w @ mu.density(pts))
            return total

        degree = mu.polynomial_degree()
        if degree is not None and degree <= 2 * self.solid_order - 3:
            return EvalResult.exact(run(False))
        return _refined_estimate(run(False), run(True))

    def ball_3d(self, mu, body: Ball) -> EvalResult:
        """Spherical product rule for an off-center ball in R^3."""
        c = np.asarray(body.center, dtype=float)

        def run(refine: bool) -> float:
            dirs, wd = sphere_rule_3d(self.solid_order, refine)
            r, wr = interval_rule(0.0, body.radius, self.solid_order, refine=refine)
            pts = c + (r[:, None, None] * dirs[None, :, :]).reshape(-1, 3)
            w = (wr[:, None] * r[:, None] ** 2 * wd[None, :]).ravel()
            return float(w @ mu.density(pts))

        return _refined_estimate(run(False), run(True))

    # ------------------------------------------------------------------
    # Quasi-Monte-Carlo
    # ------------------------------------------------------------------

    def qmc(self, mu, body, seed=None) -> EvalResult:
        """Shifted-Sobol estimate over the bounding box; error is the replicate standard error."""
        n = body.dim
        eye = np.eye(n)
        hi = geometry.support(body, eye)
        lo = -geometry.support(body, -eye)
        width = hi - lo
        box_volume = float(np.prod(width))
        if box_volume <= 0:
            return EvalResult.exact(0.0)
        member = membership_test(body)
        seed = settings.SEED if seed is None else seed
        estimates = []
        for unit_points in sobol_replicates(n, settings.QMC_LOG2_POINTS, settings.QMC_REPLICATES, seed):
            pts = lo + unit_points * width
            inside = member(pts)
            values = np.where(inside, mu.density(pts), 0.0)
            estimates.append(box_volume * float(values.mean()))
        estimates = np.asarray(estimates)
        value = float(estimates.mean())
        stderr = float(estimates.std(ddof=1) / math.sqrt(len(estimates)))
        return EvalResult.estimate(value, max(stderr, _rounding(value)), EvalMethod.QMC)


def membership_test(body):
    """Vectorized point-in-body predicate used by the QMC path."""
    n = body.dim
    if n == 1:
        lo = -float(geometry.support(body, [-1.0]))
        hi = float(geometry.support(body, [1.0]))
        return lambda pts: (pts[:, 0] >= lo) & (pts[:, 0] <= hi)
    if n == 2:
        return planar_body(body).contains
    if isinstance(body, Ball):
        c = np.asarray(body.center, dtype=float)
        return lambda pts: np.linalg.norm(pts - c, axis=1) <= body.radius
    if geometry.is_polytopal(body) and n <= settings.MAX_EXACT_HULL_DIM:
        data = geometry.hull_data(body)
        return lambda pts: data.contains(pts, settings.GEOMETRY_TOL)
    # outer approximation: <x, u> <= h(u) on a direction net
    net = geometry.direction_net(n, settings.SUPPORT_NET_SIZE)
    h = geometry.support(body, net)
    return lambda pts: np.all(pts @ net.T <= h + settings.GEOMETRY_TOL, axis=1)


def _is_axis_box(V: np.ndarray) -> bool:
    n = V.shape[1]
    if len(V) != 2**n:
        return False
    lo, hi = V.min(axis=0), V.max(axis=0)
    tol = settings.GEOMETRY_TOL
    on_corner = (np.abs(V - lo) <= tol) | (np.abs(V - hi) <= tol)
    return bool(np.all(on_corner) and np.all(hi - lo > tol))


def _centered_ball_radius(body) -> Optional[float]:
    if isinstance(body, Ball) and not any(body.center):
        return body.radius
    if isinstance(body, ScaledSum) and all(isinstance(t.body, Ball) and not any(t.body.center) for t in body.terms):
        return float(sum(t.scale * t.body.radius for t in body.terms))
    return None


# Global evaluator instance
measure_evaluator = MeasureEvaluator()


def measure(mu, body, method: Optional[str] = None, seed=None) -> EvalResult:
    """Convenience wrapper around MeasureEvaluator.evaluate."""
    return measure_evaluator.evaluate(mu, body, method=method, seed=seed)


def normal_cdf(x: float) -> float:
    """Phi(x), the standard normal distribution function."""
    return float(ndtr(x))


def gaussian_mass_check(n: int, half_width: float = 8.0, seed=None) -> EvalResult:
    """QMC estimate of the Gaussian mass of [-w, w]^n; close to 1 for large w."""
    from wbm.models.bodies import Polytope

    box = Polytope.box([-half_width] * n, [half_width] * n)
    return measure(Gaussian(), box, method="qmc", seed=seed)


def concavity_class(mu, bodies) -> float:
    """Concavity exponent s valid for mu on a class containing ``bodies``.

    Lebesgue: 1/n. Log-concave radial measures: 1/n on symmetric bodies; the
    Gaussian additionally 1/(2n) on origin-containing bodies. Otherwise 0
    (log-concavity) when mu is log-concave.
    """
    bodies = list(bodies)
    n = bodies[0].dim
    if isinstance(mu, Lebesgue):
        return 1.0 / n
    if mu.is_log_concave and all(geometry.is_symmetric(b) for b in bodies):
        return 1.0 / n
    if isinstance(mu, Gaussian) and all(geometry.contains_origin(b) for b in bodies):
        return 1.0 / (2 * n)
    if mu.is_log_concave:
        return 0.0
    raise UnsupportedRepresentation(f"No known concavity class for {mu.label()}")
