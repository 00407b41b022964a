"""
Inequality checkers for measures of Minkowski sums.

Each check evaluates both sides as EvalResults and returns an
InequalityReport; the verdict is decided from the margin and the combined
error budget.
"""

import math
from typing import List, Optional, Sequence, Union

import numpy as np
import structlog

from wbm.exceptions import (
    DegenerateDerivative,
    NonPositiveMeasure,
    NonPositiveMixed,
    OriginNotContained,
    UnsupportedConfiguration,
    UnsupportedRepresentation,
    ZeroMeasureBase,
)
from wbm.models.bodies import Ball
from wbm.models.concavity import Log, NormalInv, Power
from wbm.models.measures import Lebesgue
from wbm.models.results import EvalResult
from wbm.models.schedule import FDSchedule
from wbm.monitoring.verdicts import InequalityReport, Relation, Verdict
from wbm.services import geometry
from wbm.services.measures import concavity_class, measure
from wbm.services.mixed import mixed1, mixed2, surface_area_fd
from wbm.services.surface import weighted_surface_area

logger = structlog.get_logger(__name__)

DEFAULT_T_GRID = tuple(np.linspace(0.1, 0.9, 9))
MODULARITY_RADII = (0.1, 0.25, 0.5, 1.0, 2.0)


def _sqrt(value: EvalResult) -> EvalResult:
    """sqrt(max(x, 0)) with |sqrt(a) - sqrt(b)| <= sqrt(|a - b|) as error bound."""
    root = math.sqrt(max(value.value, 0.0))
    if value.abs_error == 0:
        return EvalResult.exact(root)
    bound = math.sqrt(value.abs_error)
    if value.value > 0:
        bound = min(bound, 0.5 * value.abs_error / math.sqrt(value.value) + value.abs_error)
    return EvalResult.estimate(root, bound, value.method)


def _s_of(F) -> Optional[float]:
    if isinstance(F, Power):
        return F.s
    if isinstance(F, Log):
        return 0.0
    return None


class InequalityChecker:
    """Evaluates inequalities on concrete instances."""

    def __init__(self, path: str = "auto", schedule: Optional[FDSchedule] = None, tolerance_scale: float = 1.0):
        self.path = path
        self.schedule = schedule
        self.tolerance_scale = tolerance_scale

    # ------------------------------------------------------------------
    # Evaluation helpers
    # ------------------------------------------------------------------

    def _m1(self, mu, K, L) -> EvalResult:
        return mixed1(mu, K, L, path=self.path, schedule=self.schedule)

    def _m2(self, mu, A, B, C) -> EvalResult:
        return mixed2(mu, A, B, C, path=self.path, schedule=self.schedule)

    def surface_area(self, mu, K) -> EvalResult:
        """mu^+(boundary K), exact path first."""
        try:
            return weighted_surface_area(mu, K)
        except UnsupportedRepresentation:
            return surface_area_fd(mu, K, self.schedule)

    def _report(self, name, lhs, rhs, relation, mu, bodies, **details) -> InequalityReport:
        report = InequalityReport(
            name=name,
            lhs=EvalResult.coerce(lhs),
            rhs=EvalResult.coerce(rhs),
            relation=relation,
            measure=mu.label() if mu is not None else "lebesgue",
            body_ids=[geometry.body_label(b) for b in bodies],
            tolerance_scale=self.tolerance_scale,
            details=details,
        )
        logger.debug("inequality_checked", inequality=name, margin=report.margin, verdict=report.verdict.value)
        return report

    @staticmethod
    def _positive(mu, *values: EvalResult) -> None:
        for v in values:
            if v.value <= 0:
                raise NonPositiveMeasure(f"{mu.label()} vanishes on an input body", value=v.value)

    @staticmethod
    def _validate_class(mu, F, bodies) -> None:
        s = _s_of(F)
        if s is None:
            return
        try:
            allowed = concavity_class(mu, bodies)
        except UnsupportedRepresentation as exc:
            raise UnsupportedConfiguration(exc.error_description) from exc
        if s > allowed + 1e-12:
            raise UnsupportedConfiguration(
                f"{mu.label()} is not known to be {s:g}-concave on this class", s=s, allowed=allowed
            )

    @staticmethod
    def _degenerate(mu, F, muK: EvalResult, muL: Optional[EvalResult], K) -> DegenerateDerivative:
        """F'(mu(K)) = 0 or undefined: surface the interpretation that applies."""
        total = mu.total_mass(K.dim)
        if math.isfinite(total) and muK.agrees_with(EvalResult.exact(total), rtol=1e-9):
            case = "contains_support"
        elif muL is not None and muK.agrees_with(muL):
            case = "constant_path"
        else:
            case = "minus_infinity"
        return DegenerateDerivative(f"F'(mu(K)) vanishes for {F.label()}", case=case, mu_K=muK.value)

    def _derivatives(self, mu, F, muK, muL, K):
        dF = F.dF(muK.value)
        if not math.isfinite(dF) or dF == 0:
            raise self._degenerate(mu, F, muK, muL, K)
        return dF, F.d2F(muK.value)

    # ------------------------------------------------------------------
    # Concavity and Minkowski-type inequalities
    # ------------------------------------------------------------------

    def check_f_concavity(self, mu, F, K, L, t_grid: Sequence[float] = DEFAULT_T_GRID) -> InequalityReport:
        """
        mu((1-t)K + tL) >= F^{-1}((1-t)F(mu(K)) + tF(mu(L))), worst margin over t.

        Raises:
            NonPositiveMeasure: if mu(K) or mu(L) is not positive
        """
        muK, muL = measure(mu, K), measure(mu, L)
        self._positive(mu, muK, muL)
        FK = muK.map(F.F, F.dF)
        FL = muL.map(F.F, F.dF)
        worst = None
        for t in t_grid:
            t = float(t)
            lhs = measure(mu, geometry.minkowski_combination([(1.0 - t, K), (t, L)]))
            rhs = (FK * (1.0 - t) + FL * t).map(F.F_inv, F.dF_inv)
            report = self._report("f_concavity", lhs, rhs, Relation.GE, mu, (K, L), t=t, F=F.label())
            if worst is None or report.margin < worst.margin:
                worst = report
        return worst

    def minkowski_first(self, mu, F, K, L) -> InequalityReport:
        """mu(K;L) >= mu(K;K) + (F(mu(L)) - F(mu(K))) / F'(mu(K))."""
        self._validate_class(mu, F, (K, L))
        muK, muL = measure(mu, K), measure(mu, L)
        dF, d2F = self._derivatives(mu, F, muK, muL, K)
        mKL, mKK = self._m1(mu, K, L), self._m1(mu, K, K)
        inv = muK.map(lambda x: 1.0 / F.dF(x), lambda x: d2F / dF**2)
        rhs = mKK + (muL.map(F.F, F.dF) - muK.map(F.F, F.dF)) * inv
        return self._report(
            "minkowski_first", mKL, rhs, Relation.GE, mu, (K, L),
            F=F.label(), mu_K=muK.value, mu_L=muL.value, mixed_KL=mKL.value, mixed_KK=mKK.value,
        )

    def minkowski_first_homogeneous(self, mu, K, L) -> InequalityReport:
        """[(1/alpha) mu(K;L)]^alpha >= mu(K)^(alpha-1) mu(L) for alpha-homogeneous 1/alpha-concave mu."""
        alpha = mu.homogeneity_degree(K.dim)
        if alpha is None:
            raise UnsupportedConfiguration(f"{mu.label()} is not homogeneous")
        self._validate_class(mu, Power(s=1.0 / alpha), (K, L))
        mKL = self._m1(mu, K, L)
        lhs = (mKL * (1.0 / alpha)) ** alpha
        rhs = measure(mu, K) ** (alpha - 1.0) * measure(mu, L)
        return self._report("minkowski_first_homogeneous", lhs, rhs, Relation.GE, mu, (K, L), alpha=alpha)

    def minkowski_second(self, mu, F, K, L) -> InequalityReport:
        """
        Minkowski's second inequality.

        For F = x^s (or log, s = 0) the form mu(K) mu(K;L,L) <= (1-s) mu(K;L)^2 is
        used; otherwise -(F''/F')(mu(K)) mu(K;L)^2 >= mu(K;L,L).
        """
        self._validate_class(mu, F, (K, L))
        muK = measure(mu, K)
        dF, d2F = self._derivatives(mu, F, muK, None, K)
        mKL = self._m1(mu, K, L)
        mKLL = self._m2(mu, K, L, L)
        s = _s_of(F)
        if s is not None:
            return self._report(
                "minkowski_second", muK * mKLL, (mKL**2) * (1.0 - s), Relation.LE, mu, (K, L),
                F=F.label(), mixed_KL=mKL.value, mixed_KLL=mKLL.value,
            )
        ratio = muK.map(lambda x: -F.d2F(x) / F.dF(x), lambda x: 0.0)
        return self._report(
            "minkowski_second", ratio * mKL**2, mKLL, Relation.GE, mu, (K, L),
            F=F.label(), first_derivative=dF, second_derivative=d2F,
        )

    def reverse_quadratic(self, mu, F, A, B, C) -> InequalityReport:
        """
        Reverse Minkowski quadratic inequality, divided through by F'(mu(A))^2:

            mu(A;B,B)mu(A;C,C) + r (mu(A;B)^2 mu(A;C,C) + mu(A;C)^2 mu(A;B,B))
              >= mu(A;B,C)^2 + 2 r mu(A;B) mu(A;C) mu(A;B,C),   r = F''/F' at mu(A).

        Raises:
            ZeroMeasureBase: if mu(A) = 0
        """
        self._validate_class(mu, F, (A, B, C))
        muA = measure(mu, A)
        if muA.value == 0:
            raise ZeroMeasureBase(f"{mu.label()}(A) = 0")
        dF, _ = self._derivatives(mu, F, muA, None, A)
        r = muA.map(lambda x: F.d2F(x) / F.dF(x), lambda x: 0.0)
        mB, mC = self._m1(mu, A, B), self._m1(mu, A, C)
        mBB, mCC, mBC = self._m2(mu, A, B, B), self._m2(mu, A, C, C), self._m2(mu, A, B, C)
        lhs = mBB * mCC + r * (mB**2 * mCC + mC**2 * mBB)
        rhs = mBC**2 + r * mB * mC * mBC * 2.0
        terms = {
            "mu_A": muA.value, "mixed_AB": mB.value, "mixed_AC": mC.value,
            "mixed_ABB": mBB.value, "mixed_ACC": mCC.value, "mixed_ABC": mBC.value, "F_ratio": r.value,
        }
        return self._report("reverse_quadratic", lhs, rhs, Relation.GE, mu, (A, B, C), F=F.label(), **terms)

    def fenchel_bounds(self, mu, s: float, A, B, C) -> List[InequalityReport]:
        """
        Two-sided bracket on mu(A)mu(A;B,C) / (mu(A;B)mu(A;C)) and the Fenchel-type bound.

        For Lebesgue the classical 2V(A,B)V(A,C) >= Vol(A)V(A,B,C) is appended.

        Raises:
            OriginNotContained: if a body misses the origin
            NonPositiveMixed: if mu(A;B) or mu(A;C) is not positive
        """
        if not 0.0 <= s < 1.0:
            raise UnsupportedConfiguration("s must lie in [0, 1)", s=s)
        for body in (A, B, C):
            if not geometry.contains_origin(body):
                raise OriginNotContained(f"{geometry.body_label(body)} does not contain the origin")
        self._validate_class(mu, Log() if s == 0 else Power(s=s), (A, B, C))
        muA = measure(mu, A)
        mB, mC = self._m1(mu, A, B), self._m1(mu, A, C)
        for m in (mB, mC):
            if m.value <= 0:
                raise NonPositiveMixed("First mixed measure is not positive", value=m.value)
        mBB, mCC, mBC = self._m2(mu, A, B, B), self._m2(mu, A, C, C), self._m2(mu, A, B, C)

        x = muA * mBB / ((1.0 - s) * mB**2)
        y = muA * mCC / ((1.0 - s) * mC**2)
        D = (1.0 - x) * (1.0 - y)
        root = _sqrt(D)
        ratio = muA * mBC / (mB * mC)
        bodies = (A, B, C)
        details = {"s": s, "x": x.value, "y": y.value, "D": D.value}
        reports = [
            self._report("fenchel_bracket_lower", ratio, (1.0 - root) * (1.0 - s), Relation.GE, mu, bodies, **details),
            self._report("fenchel_bracket_upper", ratio, (1.0 + root) * (1.0 - s), Relation.LE, mu, bodies, **details),
            self._report(
                "fenchel_type_bound", ratio, (2.0 - (x + y) * 0.5) * (1.0 - s), Relation.LE, mu, bodies, **details
            ),
        ]
        if isinstance(mu, Lebesgue):
            n = A.dim
            lhs = mB * mC * (2.0 / n**2)
            rhs = muA * mBC / (n * (n - 1.0))
            reports.append(self._report("fenchel_classical", lhs, rhs, Relation.GE, mu, bodies))
        return reports

    def classical_minkowski_quadratic(self, A, B, C) -> InequalityReport:
        """V(A[n-2],B,C)^2 >= V(A[n-2],B,B) V(A[n-2],C,C); planar mixed areas by polarization."""
        lam = Lebesgue()
        n = A.dim
        if n == 2:

            def V(K, L):
                return (measure(lam, geometry.minkowski_sum(K, L)) - measure(lam, K) - measure(lam, L)) * 0.5

            vBC, vBB, vCC = V(B, C), measure(lam, B), measure(lam, C)
        else:
            norm = 1.0 / (n * (n - 1.0))
            vBC = self._m2(lam, A, B, C) * norm
            vBB = self._m2(lam, A, B, B) * norm
            vCC = self._m2(lam, A, C, C) * norm
        return self._report("minkowski_quadratic", vBC**2, vBB * vCC, Relation.GE, lam, (A, B, C), mixed_BC=vBC.value)

    # ------------------------------------------------------------------
    # Modularity
    # ------------------------------------------------------------------

    def supermod_global(self, mu, A, B, C, reverse: bool = False) -> InequalityReport:
        """mu(A+B+C) + mu(A) >= mu(A+B) + mu(A+C); ``reverse`` checks submodularity."""
        AB = geometry.minkowski_sum(A, B)
        lhs = measure(mu, geometry.minkowski_sum(AB, C)) + measure(mu, A)
        rhs = measure(mu, AB) + measure(mu, geometry.minkowski_sum(A, C))
        name, relation = ("submod_global", Relation.LE) if reverse else ("supermod_global", Relation.GE)
        return self._report(name, lhs, rhs, relation, mu, (A, B, C))

    def supermod_local2(self, mu, A, B, C) -> InequalityReport:
        """mu(A+C;B) >= mu(A;B)."""
        lhs = self._m1(mu, geometry.minkowski_sum(A, C), B)
        return self._report("supermod_local2", lhs, self._m1(mu, A, B), Relation.GE, mu, (A, B, C))

    def supermod_local3(self, mu, A, B, C) -> InequalityReport:
        """mu(A;B,C) >= 0."""
        return self._report("supermod_local3", self._m2(mu, A, B, C), 0.0, Relation.GE, mu, (A, B, C))

    def supermod_consistency(self, mu, A, B, C) -> List[InequalityReport]:
        """The three supermodularity forms plus an agreement report over their decisive verdicts."""
        reports = [f(mu, A, B, C) for f in (self.supermod_global, self.supermod_local2, self.supermod_local3)]
        decisive = {r.verdict for r in reports if r.verdict != Verdict.INCONCLUSIVE}
        agree = len(decisive) <= 1
        reports.append(
            self._report(
                "supermod_consistency", float(agree), 1.0, Relation.EQ, mu, (A, B, C),
                verdicts=[r.verdict.value for r in reports],
            )
        )
        return reports

    def surface_monotonicity(self, mu, K, L) -> InequalityReport:
        """mu^+(boundary(K+L)) >= mu^+(boundary K)."""
        lhs = self.surface_area(mu, geometry.minkowski_sum(K, L))
        return self._report("surface_monotonicity", lhs, self.surface_area(mu, K), Relation.GE, mu, (K, L))

    def radial_modularity(
        self, mu, n: int, radii: Sequence[float] = MODULARITY_RADII, r_max: float = 6.0
    ) -> InequalityReport:
        """
        Classify r -> V(r) r^(n-1) and test supermodularity on centered ball triples.

        The returned report is the worst supermodular ball triple; its details
        carry the profile classification and the violation counts in both
        directions.
        """
        r = np.linspace(r_max / 600, r_max, 600)
        profile = mu.radial_profile(r, n) * r ** (n - 1)
        steps = np.diff(profile)
        tol = 1e-12 * max(1.0, float(np.max(np.abs(profile))))
        if np.all(steps >= -tol):
            shape = "increasing"
        elif np.all(steps <= tol):
            shape = "decreasing"
        else:
            shape = "neither"

        worst, super_violations, sub_violations = None, 0, 0
        for a in radii:
            for b in radii:
                for c in radii:
                    if c < b:
                        continue
                    report = self._ball_triple(mu, n, a, b, c)
                    if report.verdict == Verdict.VIOLATED:
                        super_violations += 1
                    elif report.verdict == Verdict.HOLDS:
                        sub_violations += 1
                    if worst is None or report.margin < worst.margin:
                        worst = report
        worst.name = "radial_modularity"
        worst.details.update(
            profile=shape, super_violations=super_violations, sub_violations=sub_violations, dim=n
        )
        logger.info("radial_modularity", measure=mu.label(), dim=n, profile=shape,
                    super_violations=super_violations, sub_violations=sub_violations)
        return worst

    def _ball_triple(self, mu, n, a, b, c) -> InequalityReport:
        def ball(radius):
            return measure(mu, Ball.unit(n, radius=radius))

        lhs = ball(a + b + c) + ball(a)
        rhs = ball(a + b) + ball(a + c)
        bodies = [Ball.unit(n, radius=x) for x in (a, b, c)]
        return self._report("supermod_global", lhs, rhs, Relation.GE, mu, bodies, radii=[a, b, c])

    def dilation_convexity(self, mu, K, t_grid: Sequence[float] = tuple(np.linspace(0.25, 2.0, 8))) -> InequalityReport:
        """
        Classify t -> mu(tK) as convex, concave or neither from second differences.

        Cross-checks against supermodularity of dilate triples (aK, hK, hK) on the
        same grid; convexity and supermodularity must agree.
        """
        t = np.asarray(t_grid, dtype=float)
        h = float(t[1] - t[0])
        if not np.allclose(np.diff(t), h):
            raise UnsupportedConfiguration("Dilation grid must be uniform")
        values = [measure(mu, geometry.scale(K, float(x))) for x in t]
        second = [values[i + 1] - values[i] * 2.0 + values[i - 1] for i in range(1, len(values) - 1)]
        budget_ok = [abs(d.value) > 3.0 * d.abs_error for d in second]
        signs = {np.sign(d.value) for d, ok in zip(second, budget_ok) if ok}
        shape = "convex" if signs <= {1.0} else "concave" if signs == {-1.0} else "neither"
        worst = min(second, key=lambda d: d.value)
        Kh = geometry.scale(K, h)
        cross = [self.supermod_global(mu, geometry.scale(K, float(x)), Kh, Kh) for x in t[:-2]]
        cross_verdicts = {r.verdict for r in cross if r.verdict != Verdict.INCONCLUSIVE}
        consistent = (shape != "convex" or Verdict.VIOLATED not in cross_verdicts) and (
            shape != "concave" or Verdict.HOLDS not in cross_verdicts
        )
        return self._report(
            "dilation_convexity", worst, 0.0, Relation.GE, mu, (K,),
            shape=shape, consistent=consistent, cross_verdicts=sorted(v.value for v in cross_verdicts),
        )

    # ------------------------------------------------------------------
    # Log-submodularity
    # ------------------------------------------------------------------

    def log_submodularity(self, mu, A, B, C) -> InequalityReport:
        """mu(A) mu(A+B+C) <= mu(A+B) mu(A+C)."""
        AB, AC = geometry.minkowski_sum(A, B), geometry.minkowski_sum(A, C)
        values = [measure(mu, A), measure(mu, geometry.minkowski_sum(AB, C)), measure(mu, AB), measure(mu, AC)]
        self._positive(mu, values[0], values[2], values[3])
        return self._report(
            "log_submodularity", values[0] * values[1], values[2] * values[3], Relation.LE, mu, (A, B, C)
        )

    def log_submodularity_local(self, mu, A, B, C, s0: float = 0.0, t0: float = 0.0) -> InequalityReport:
        """mu(A')mu(A';B,C) <= mu(A';B)mu(A';C) at the shifted base A' = A + s0 B + t0 C."""
        base = geometry.minkowski_combination([(1.0, A), (s0, B), (t0, C)]) if s0 or t0 else A
        muA = measure(mu, base)
        self._positive(mu, muA)
        lhs = muA * self._m2(mu, base, B, C)
        rhs = self._m1(mu, base, B) * self._m1(mu, base, C)
        return self._report("log_submodularity_local", lhs, rhs, Relation.LE, mu, (A, B, C), s0=s0, t0=t0)

    def bm_constant(self, A, B, C) -> EvalResult:
        """c(A,B,C) = Vol(A) Vol(A+B+C) / (Vol(A+B) Vol(A+C))."""
        lam = Lebesgue()
        AB, AC = geometry.minkowski_sum(A, B), geometry.minkowski_sum(A, C)
        denominator = measure(lam, AB) * measure(lam, AC)
        if denominator.value <= 0:
            raise NonPositiveMeasure("Vol(A+B) Vol(A+C) vanishes")
        return measure(lam, A) * measure(lam, geometry.minkowski_sum(AB, C)) / denominator

    def ruzsa_check(self, mu, A, B, C) -> InequalityReport:
        """mu(A) mu(B+C) <= mu(A+B) mu(A+C)."""
        lhs = measure(mu, A) * measure(mu, geometry.minkowski_sum(B, C))
        rhs = measure(mu, geometry.minkowski_sum(A, B)) * measure(mu, geometry.minkowski_sum(A, C))
        return self._report("ruzsa", lhs, rhs, Relation.LE, mu, (A, B, C))

    def ruzsa_shifted_balls(
        self, mu, A, v: Sequence[float], radii: Sequence[float] = (0.0, 1.0, 2.0, 4.0, 8.0)
    ) -> List[InequalityReport]:
        """ruzsa_check with B = B_2^n + r v, C = B_2^n - r v; the left side does not depend on r."""
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        reports = []
        for r in radii:
            B = Ball(center=tuple((r * v).tolist()), radius=1.0, name=f"ball+{r:g}v")
            C = Ball(center=tuple((-r * v).tolist()), radius=1.0, name=f"ball-{r:g}v")
            report = self.ruzsa_check(mu, A, B, C)
            report.details["shift"] = float(r)
            reports.append(report)
        return reports


# Global checker instance
inequality_checker = InequalityChecker()


def check_f_concavity(mu, F, K, L, t_grid: Sequence[float] = DEFAULT_T_GRID) -> InequalityReport:
    return inequality_checker.check_f_concavity(mu, F, K, L, t_grid)


def minkowski_first(mu, F, K, L) -> InequalityReport:
    return inequality_checker.minkowski_first(mu, F, K, L)


def minkowski_first_homogeneous(mu, K, L) -> InequalityReport:
    return inequality_checker.minkowski_first_homogeneous(mu, K, L)


def minkowski_second(mu, F, K, L) -> InequalityReport:
    return inequality_checker.minkowski_second(mu, F, K, L)


def reverse_quadratic(mu, F, A, B, C) -> InequalityReport:
    return inequality_checker.reverse_quadratic(mu, F, A, B, C)


def fenchel_bounds(mu, s: float, A, B, C) -> List[InequalityReport]:
    return inequality_checker.fenchel_bounds(mu, s, A, B, C)


def classical_minkowski_quadratic(A, B, C) -> InequalityReport:
    return inequality_checker.classical_minkowski_quadratic(A, B, C)


def supermod_global(mu, A, B, C, reverse: bool = False) -> InequalityReport:
    return inequality_checker.supermod_global(mu, A, B, C, reverse)


def supermod_local2(mu, A, B, C) -> InequalityReport:
    return inequality_checker.supermod_local2(mu, A, B, C)


def supermod_local3(mu, A, B, C) -> InequalityReport:
    return inequality_checker.supermod_local3(mu, A, B, C)


def supermod_consistency(mu, A, B, C) -> List[InequalityReport]:
    return inequality_checker.supermod_consistency(mu, A, B, C)


def surface_monotonicity(mu, K, L) -> InequalityReport:
    return inequality_checker.surface_monotonicity(mu, K, L)


def radial_modularity(mu, n: int, radii: Sequence[float] = MODULARITY_RADII) -> InequalityReport:
    return inequality_checker.radial_modularity(mu, n, radii)


def dilation_convexity(mu, K, t_grid: Sequence[float] = tuple(np.linspace(0.25, 2.0, 8))) -> InequalityReport:
    return inequality_checker.dilation_convexity(mu, K, t_grid)


def log_submodularity(mu, A, B, C) -> InequalityReport:
    return inequality_checker.log_submodularity(mu, A, B, C)


def log_submodularity_local(mu, A, B, C, s0: float = 0.0, t0: float = 0.0) -> InequalityReport:
    return inequality_checker.log_submodularity_local(mu, A, B, C, s0, t0)


def bm_constant(A, B, C) -> EvalResult:
    return inequality_checker.bm_constant(A, B, C)


def ruzsa_check(mu, A, B, C) -> InequalityReport:
    return inequality_checker.ruzsa_check(mu, A, B, C)


def ruzsa_shifted_balls(
    mu, A, v: Sequence[float], radii: Sequence[float] = (0.0, 1.0, 2.0, 4.0, 8.0)
) -> List[InequalityReport]:
    return inequality_checker.ruzsa_shifted_balls(mu, A, v, radii)


def concavity_spec(kind: str, s: Optional[float] = None) -> Union[Power, Log, NormalInv]:
    """Build an F from CLI-style arguments."""
    if kind == "power":
        if s is None:
            raise UnsupportedConfiguration("power concavity needs s")
        return Power(s=s)
    if kind == "log":
        return Log()
    if kind == "normal_inv":
        return NormalInv()
    raise UnsupportedConfiguration(f"Unknown concavity kind {kind}")
