"""
One-dimensional convex-function inequality lab.

The arc-length weighted inequality for nonnegative convex h on [a, b]

    2((b-a)/2)^2 + h(a)^2 + h(b)^2 >= 2 * integral of h sqrt(1 + h'^2),

its equality family, the translation-optimized form, the two-dimensional
probe on thin rectangles and the chain decomposition of planar bodies.
All one-dimensional quantities are closed forms on piecewise-linear h.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from wbm.config import settings
from wbm.exceptions import Negative, UnsupportedConfiguration
from wbm.models.convexfn import ConvexPL
from wbm.models.results import EvalMethod, EvalResult
from wbm.monitoring.verdicts import InequalityReport, Relation
from wbm.services import geometry
from wbm.services.planar import planar_body
from wbm.services.quadrature import interval_rule, square_rule

logger = structlog.get_logger(__name__)

PROBE_EXPONENTS = (1, 2, 3)
SMOOTH_BOUNDARY_SAMPLES = 720


def _exact_report(name: str, lhs: float, rhs: float, relation: Relation = Relation.GE, **details) -> InequalityReport:
    return InequalityReport(
        name=name,
        lhs=EvalResult.exact(lhs),
        rhs=EvalResult.exact(rhs),
        relation=relation,
        measure="lebesgue",
        details=details,
    )


def _restrict(h: ConvexPL, a: float, b: float) -> ConvexPL:
    if not h.a <= a < b <= h.b:
        raise UnsupportedConfiguration("Interval lies outside the domain of h", domain=[h.a, h.b], interval=[a, b])
    if (a, b) == (h.a, h.b):
        return h
    inner = [x for x in h.breakpoints if a < x < b]
    x = np.array([a, *inner, b])
    return ConvexPL(breakpoints=tuple(x.tolist()), values=tuple(h(x).tolist()), nonnegative=h.nonnegative)


def _sides(h: ConvexPL) -> Tuple[float, float]:
    width = h.b - h.a
    lhs = 2.0 * (0.5 * width) ** 2 + h.values[0] ** 2 + h.values[-1] ** 2
    return lhs, 2.0 * h.weighted_arc_integral()


def arc_length_check(h: ConvexPL, a: Optional[float] = None, b: Optional[float] = None) -> InequalityReport:
    """
    2((b-a)/2)^2 + h(a)^2 + h(b)^2 >= 2 * integral_a^b h sqrt(1 + h'^2).

    The weaker form a^2 + b^2 + h(a)^2 + h(b)^2 >= rhs is attached in the
    details.

    Raises:
        Negative: if h takes negative values on [a, b]
    """
    h = _restrict(h, h.a if a is None else a, h.b if b is None else b)
    if not h.is_nonnegative():
        raise Negative("h must be nonnegative", minimum=float(min(h.values)))
    lhs, rhs = _sides(h)
    weak = h.a**2 + h.b**2 + h.values[0] ** 2 + h.values[-1] ** 2
    return _exact_report(
        "arc_length", lhs, rhs, a=h.a, b=h.b, pieces=len(h.breakpoints) - 1, weak_lhs=weak, weak_margin=weak - rhs
    )


def arc_length_weak_check(h: ConvexPL) -> InequalityReport:
    """a^2 + b^2 + h(a)^2 + h(b)^2 >= 2 * integral h sqrt(1 + h'^2)."""
    report = arc_length_check(h)
    return _exact_report("arc_length_weak", report.details["weak_lhs"], report.rhs.value, a=h.a, b=h.b)


def equality_family(alpha: float, a: float, b: float) -> ConvexPL:
    """h(x) = alpha x + ((s - alpha)/2) b - ((s + alpha)/2) a with s = sqrt(1 + alpha^2)."""
    if not b > a:
        raise UnsupportedConfiguration("Need b > a", a=a, b=b)
    s = math.sqrt(1.0 + alpha * alpha)
    # h(a) = (s - alpha)(b - a)/2, h(b) = (s + alpha)(b - a)/2, both >= 0
    ha = 0.5 * (s - alpha) * (b - a)
    hb = 0.5 * (s + alpha) * (b - a)
    return ConvexPL(breakpoints=(a, b), values=(ha, hb), nonnegative=True)


def optimized_form_check(h: ConvexPL) -> InequalityReport:
    """
    Translation-optimized form on [0, 1]:

        integral [(h(0)+h(1))/2 - h] sqrt(1 + h'^2) >= (L(h)^2 - L(h_lin)^2) / 4.

    h needs no sign. Details carry c_opt = (h(0)+h(1))/2 - L(h)/2, the gap of
    the round trip through arc_length_check on h - c_opt (whose margin is twice this
    one) and h_opt(0) + h_opt(1) - L(h).
    """
    if (h.a, h.b) != (0.0, 1.0):
        h = h.normalized()
    h0, h1 = h.values[0], h.values[-1]
    length = h.arc_length()
    lhs = 0.5 * (h0 + h1) * length - h.weighted_arc_integral()
    rhs = 0.25 * (length**2 - h.linear_interpolant().arc_length() ** 2)
    c_opt = 0.5 * (h0 + h1) - 0.5 * length
    h_opt = h.shifted(-c_opt)
    b_lhs, b_rhs = _sides(h_opt)
    round_trip = (b_lhs - b_rhs) - 2.0 * (lhs - rhs)
    return _exact_report(
        "optimized_form",
        lhs,
        rhs,
        c_opt=c_opt,
        round_trip_gap=round_trip,
        normalization_gap=h_opt.values[0] + h_opt.values[-1] - h_opt.arc_length(),
        arc_length=length,
    )


# ----------------------------------------------------------------------
# Thin rectangle probe
# ----------------------------------------------------------------------


def _probe_profile(alpha: Optional[int], beta: int, lam: float):
    def h(x1, x2):
        first = x1**alpha if alpha is not None else 0.0 * x1
        return first + lam * x2**beta

    def grad(x1, x2):
        d1 = alpha * x1 ** (alpha - 1) if alpha is not None else 0.0 * x1
        d2 = lam * beta * x2 ** (beta - 1)
        return d1, d2

    return h, grad


def thin_rectangle_probe(
    alpha: Optional[int], beta: int, lam: float, eps: float, order: Optional[int] = None
) -> InequalityReport:
    """
    For C = [0,1] x [0,eps] and h = x1^alpha + lam x2^beta:

        integral over the boundary of C of (|y|^2 + h^2)  >=  integral over C of h sqrt(1 + |grad h|^2).

    ``alpha=None`` drops the x1 term (so lam = 0 gives h = 0).

    Raises:
        UnsupportedConfiguration: for exponents outside {1, 2, 3} or non-positive eps
    """
    if (alpha is not None and alpha not in PROBE_EXPONENTS) or beta not in PROBE_EXPONENTS:
        raise UnsupportedConfiguration("Exponents must lie in {1, 2, 3}", alpha=alpha, beta=beta)
    if eps <= 0 or lam < 0:
        raise UnsupportedConfiguration("Need eps > 0 and lam >= 0", eps=eps, lam=lam)
    order = order or settings.QUADRATURE_ORDER
    h, grad = _probe_profile(alpha, beta, lam)
    corners = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, eps], [0.0, eps]])

    def boundary(refine: bool) -> float:
        total = 0.0
        for p, q in zip(corners, np.roll(corners, -1, axis=0)):
            length = float(np.linalg.norm(q - p))
            s, w = interval_rule(0.0, 1.0, order, refine=refine)
            pts = p + s[:, None] * (q - p)
            total += length * float(w @ (np.sum(pts**2, axis=1) + h(pts[:, 0], pts[:, 1]) ** 2))
        return total

    def area(refine: bool) -> float:
        u, v, w = square_rule(order, refine)
        x1, x2 = u, eps * v
        d1, d2 = grad(x1, x2)
        return eps * float(w @ (h(x1, x2) * np.sqrt(1.0 + d1**2 + d2**2)))

    lhs = [boundary(False), boundary(True)]
    rhs = [area(False), area(True)]
    report = InequalityReport(
        name="thin_rectangle_probe",
        lhs=EvalResult.estimate(lhs[1], abs(lhs[1] - lhs[0]) + 1e-15 * abs(lhs[1]), EvalMethod.QUADRATURE),
        rhs=EvalResult.estimate(rhs[1], abs(rhs[1] - rhs[0]) + 1e-15 * abs(rhs[1]), EvalMethod.QUADRATURE),
        relation=Relation.GE,
        measure="lebesgue",
        body_ids=[f"[0,1]x[0,{eps:g}]"],
        details={"alpha": alpha, "beta": beta, "lambda": lam, "eps": eps},
    )
    logger.debug("thin_rectangle_probe", alpha=alpha, beta=beta, lam=lam, eps=eps, margin=report.margin)
    return report


# ----------------------------------------------------------------------
# Chain decomposition of planar bodies
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ArclengthWitness:
    """K rotated so that u points up: {a <= x1 <= b, g(x1) <= x2 <= f(x1)}.

    ``upper`` stores the convex function -f, ``lower`` the convex g.
    """

    a: float
    b: float
    upper: ConvexPL
    lower: ConvexPL
    rotation: np.ndarray

    def f(self, x):
        return -self.upper(x)

    def g(self, x):
        return self.lower(x)

    def reconstruct(self) -> np.ndarray:
        """Canonical vertices of the body rebuilt from both chains in original coordinates."""
        top = np.column_stack([self.upper.x, -self.upper.y])
        bottom = np.column_stack([self.lower.x, self.lower.y])
        return geometry.canonical_vertices(np.vstack([top, bottom]) @ self.rotation)

    def reduced_expression(self) -> float:
        """a^2 + b^2 + f(a)^2 + f(b)^2 + 2 * integral f sqrt(1 + f'^2)."""
        fa, fb = -self.upper.values[0], -self.upper.values[-1]
        return self.a**2 + self.b**2 + fa**2 + fb**2 - 2.0 * self.upper.weighted_arc_integral()

    def reduced_report(self) -> InequalityReport:
        return _exact_report("arclength_reduction", self.reduced_expression(), 0.0, a=self.a, b=self.b)


def _rotation_to_e2(u: np.ndarray) -> np.ndarray:
    """Orthogonal R with R u = e2 (rows: u-perp, u)."""
    u = u / np.linalg.norm(u)
    return np.array([[u[1], -u[0]], [u[0], u[1]]])


def _chain(points: np.ndarray, upper: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Monotone chain of the hull; one value per abscissa."""
    pts = points[np.lexsort((points[:, 1], points[:, 0]))]
    sign = -1.0 if upper else 1.0
    chain: List[np.ndarray] = []
    for p in pts:
        while len(chain) >= 2:
            o, q = chain[-2], chain[-1]
            cross = (q[0] - o[0]) * (p[1] - o[1]) - (q[1] - o[1]) * (p[0] - o[0])
            if sign * cross <= 0:
                chain.pop()
            else:
                break
        chain.append(p)
    arr = np.array(chain)
    # keep the extreme value at repeated abscissae
    xs, ys = [], []
    for x, y in arr:
        if xs and abs(x - xs[-1]) <= settings.GEOMETRY_TOL:
            ys[-1] = max(ys[-1], y) if upper else min(ys[-1], y)
        else:
            xs.append(x)
            ys.append(y)
    return np.array(xs), np.array(ys)


def arclength_witness(K, u: Sequence[float] = (0.0, 1.0)) -> ArclengthWitness:
    """
    Split a planar body into its upper concave and lower convex chains along u.

    Bodies with a curved part are replaced by an inscribed polygon through
    SMOOTH_BOUNDARY_SAMPLES boundary points.
    """
    pb = planar_body(K)
    if pb.radius > 0:
        theta = np.linspace(0.0, 2.0 * math.pi, SMOOTH_BOUNDARY_SAMPLES, endpoint=False)
        points = pb.boundary_point(theta)
    else:
        points = pb.vertices
    R = _rotation_to_e2(np.asarray(u, dtype=float))
    W = points @ R.T
    if np.ptp(W[:, 0]) <= settings.GEOMETRY_TOL:
        raise UnsupportedConfiguration("Body has no width orthogonal to u")
    xu, yu = _chain(W, upper=True)
    xl, yl = _chain(W, upper=False)
    return ArclengthWitness(
        a=float(xu[0]),
        b=float(xu[-1]),
        upper=ConvexPL(breakpoints=tuple(xu.tolist()), values=tuple((-yu).tolist())),
        lower=ConvexPL(breakpoints=tuple(xl.tolist()), values=tuple(yl.tolist())),
        rotation=R,
    )


# ----------------------------------------------------------------------
# Random instances
# ----------------------------------------------------------------------


def random_convex_pl(
    rng: np.random.Generator,
    k_range: Tuple[int, int] = (2, 12),
    nonnegative: bool = True,
    domain: Optional[Tuple[float, float]] = None,
) -> ConvexPL:
    """Random convex PL function: sorted slopes on a random grid, shifted to be >= 0 if requested."""
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    if domain is None:
        a = float(rng.uniform(-2.0, 1.0))
        b = a + float(rng.uniform(0.1, 3.0))
    else:
        a, b = domain
    inner = np.sort(rng.uniform(a, b, size=max(k - 2, 0)))
    x = np.unique(np.concatenate([[a], inner, [b]]))
    slopes = np.sort(rng.normal(scale=2.0, size=len(x) - 1))
    y = np.concatenate([[0.0], np.cumsum(slopes * np.diff(x))])
    if nonnegative:
        y = y - y.min() + float(rng.uniform(0.0, 1.0))
    else:
        y = y + float(rng.normal(scale=2.0))
    return ConvexPL(breakpoints=tuple(x.tolist()), values=tuple(y.tolist()), nonnegative=nonnegative)
