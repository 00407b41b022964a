"""
Executable claim registry.

Each claim names an end-to-end reproduction: a runner producing
InequalityReports for a budget and seed, and the expectation its verdicts
must meet. ``wbm repro <claim-id>`` exits 0 iff the expectation is met.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
import structlog

from wbm.config import settings
from wbm.exceptions import InvalidConfig
from wbm.models.bodies import Ball, Polytope, Segment
from wbm.models.concavity import Power
from wbm.models.measures import Gaussian, Lebesgue, RadialExp, RadialPower
from wbm.models.results import EvalResult
from wbm.models.runs import BodyClass, BodyFamily, GeneratorConfig
from wbm.monitoring.verdicts import InequalityReport, Relation, SweepSummary, Verdict, summarize
from wbm.services import convexfn, geometry
from wbm.services.inequalities import inequality_checker
from wbm.services.measures import measure
from wbm.services.mixed import disk_normal_flux, homogeneity_suite, mixed1_fd, mixed1_formula, mixed2_formula
from wbm.services.planar import planar_body
from wbm.services.search import instance_rngs, mixed2_sign_scan, random_instances, sweep, target_sweep
from wbm.services.surface import weighted_surface_area

logger = structlog.get_logger(__name__)

ORACLE_RTOL = 1e-3
EXACT_RTOL = 1e-9
MAX_INCONCLUSIVE = 0.1


class Expectation(str, Enum):
    """What a claim's verdicts must look like."""

    ALL_HOLD = "all_hold"  # no violation, inconclusive fraction below MAX_INCONCLUSIVE
    FINDS_VIOLATION = "finds_violation"  # every inequality name has a violated instance


Runner = Callable[[int, int], List[InequalityReport]]


@dataclass(frozen=True)
class Claim:
    """A registered reproduction; ``accept`` is an extra predicate on the reports."""

    claim_id: str
    description: str
    expectation: Expectation
    budget: int
    run: Runner
    accept: Optional[Callable[[List[InequalityReport]], bool]] = None


@dataclass
class ClaimResult:
    claim: Claim
    reports: List[InequalityReport] = field(default_factory=list)
    summary: Optional[SweepSummary] = None
    matched: bool = False

    def to_dict(self):
        return {
            "claim_id": self.claim.claim_id,
            "expectation": self.claim.expectation.value,
            "matched": self.matched,
            **(self.summary.to_dict() if self.summary else {}),
        }


def _flatten(results: Iterable) -> List[InequalityReport]:
    out: List[InequalityReport] = []
    for r in results:
        if isinstance(r, list):
            out.extend(r)
        else:
            out.append(r)
    return out


def _identity(name, lhs, rhs, mu_label, body_ids, rtol=EXACT_RTOL, **details) -> InequalityReport:
    return InequalityReport(
        name=name, lhs=EvalResult.coerce(lhs), rhs=EvalResult.coerce(rhs), relation=Relation.EQ,
        measure=mu_label, body_ids=list(body_ids), rtol=rtol, details=details,
    )


_POLYGONS = GeneratorConfig(family=BodyFamily.POLYGON)
_SYMMETRIC_POLYGONS = GeneratorConfig(family=BodyFamily.POLYGON, body_class=BodyClass.SYMMETRIC)
_ORIGIN_POLYGONS = GeneratorConfig(family=BodyFamily.POLYGON, body_class=BodyClass.CONTAINS_ORIGIN)


# ----------------------------------------------------------------------
# Runners
# ----------------------------------------------------------------------


def _oracle_first_order(budget: int, seed: int) -> List[InequalityReport]:
    def check(mu):
        def agree(K, L):
            formula = mixed1_formula(mu, K, L)
            fd = mixed1_fd(mu, K, L, seed=seed)
            return _identity("oracle_mixed1", formula, fd, mu.label(), [K.name, L.name], rtol=ORACLE_RTOL)

        return agree

    pairs = random_instances(_POLYGONS, budget, 2, seed)
    reports: List[InequalityReport] = []
    for mu in (Lebesgue(), Gaussian(), RadialPower(p=2.0)):
        reports.extend(sweep(check(mu), pairs))
    return reports


def _classical_reductions(budget: int, seed: int) -> List[InequalityReport]:
    lam = Lebesgue()
    disk = Ball.unit(2, name="B2")
    reports = []
    for (K,) in random_instances(_POLYGONS, budget, 1, seed):
        pb = planar_body(K)
        self_mixed = mixed1_formula(lam, K, K)
        reports.append(_identity("self_mixed_area", self_mixed, measure(lam, K) * 2.0, "lebesgue", [K.name]))
        reports.append(_identity("perimeter", mixed1_formula(lam, K, disk), pb.perimeter(), "lebesgue", [K.name, "B2"]))

    B, C = random_instances(_POLYGONS, 1, 2, seed + 1)[0]
    polarization = measure(lam, geometry.minkowski_sum(B, C)) - measure(lam, B) - measure(lam, C)
    for (A,) in random_instances(_POLYGONS, 5, 1, seed + 2):
        reports.append(
            _identity(
                "mixed_area_polarization",
                mixed2_formula(lam, A, B, C),
                polarization,
                "lebesgue",
                [A.name, B.name, C.name],
            )
        )
    return reports


def _homogeneity_radial_power(budget: int, seed: int) -> List[InequalityReport]:
    mu = RadialPower(p=2.0)
    reports = []
    for A, B, C in random_instances(_POLYGONS, budget, 3, seed):
        for report in homogeneity_suite(mu, A, B, C):
            report.rtol = ORACLE_RTOL
            reports.append(report)

    square = Polytope.box([-1.0, -1.0], [1.0, 1.0], name="[-1,1]^2")
    golden = EvalResult.exact(32.0 / 3.0)
    formula = weighted_surface_area(mu, square)
    reports.append(_identity("golden_surface_formula", formula, golden, mu.label(), [square.name], rtol=1e-6))
    reports.append(
        _identity(
            "golden_surface_fd",
            mixed1_fd(mu, square, Ball.unit(2), seed=seed),
            golden,
            mu.label(),
            [square.name],
            rtol=1e-6,
        )
    )
    return reports


def _concavity_sweep(budget: int, seed: int) -> List[InequalityReport]:
    lam = Lebesgue()
    F = Power(s=0.5)
    pairs = random_instances(_POLYGONS, budget, 2, seed)
    return sweep(lambda K, L: inequality_checker.check_f_concavity(lam, F, K, L), pairs)


def _minkowski_lebesgue(budget: int, seed: int) -> List[InequalityReport]:
    lam = Lebesgue()
    F = Power(s=0.5)
    pairs = random_instances(_POLYGONS, budget, 2, seed)
    first = sweep(lambda K, L: inequality_checker.minkowski_first(lam, F, K, L), pairs)
    second = sweep(lambda K, L: inequality_checker.minkowski_second(lam, F, K, L), pairs)
    return first + second


def _gaussian_minkowski_second(budget: int, seed: int) -> List[InequalityReport]:
    gamma = Gaussian()
    F = Power(s=0.5)
    pairs = random_instances(_SYMMETRIC_POLYGONS, budget, 2, seed)
    return sweep(lambda K, L: inequality_checker.minkowski_second(gamma, F, K, L), pairs)


def _reverse_quadratic(budget: int, seed: int) -> List[InequalityReport]:
    F = Power(s=0.5)
    lebesgue = sweep(
        lambda A, B, C: inequality_checker.reverse_quadratic(Lebesgue(), F, A, B, C),
        random_instances(_POLYGONS, budget, 3, seed),
    )
    gaussian = sweep(
        lambda A, B, C: inequality_checker.reverse_quadratic(Gaussian(), F, A, B, C),
        random_instances(_SYMMETRIC_POLYGONS, budget, 3, seed + 1),
    )
    return lebesgue + gaussian


def _fenchel(budget: int, seed: int) -> List[InequalityReport]:
    triples = random_instances(_ORIGIN_POLYGONS, budget, 3, seed)
    return _flatten(sweep(lambda A, B, C: inequality_checker.fenchel_bounds(Lebesgue(), 0.5, A, B, C), triples))


def _lebesgue_supermodular(budget: int, seed: int) -> List[InequalityReport]:
    triples = random_instances(_POLYGONS, budget, 3, seed)
    return _flatten(sweep(lambda A, B, C: inequality_checker.supermod_consistency(Lebesgue(), A, B, C), triples))


def _gaussian_not_modular(budget: int, seed: int) -> List[InequalityReport]:
    return target_sweep("supermod_global", budget=budget, seed=seed) + target_sweep(
        "submod_global", budget=budget, seed=seed
    )


def _gaussian_interval_submodular(budget: int, seed: int) -> List[InequalityReport]:
    k = max(2, round(budget ** (1.0 / 3.0)))
    radii = np.linspace(0.1, 2.0, k)
    gamma = Gaussian()

    def interval(r):
        return Segment.symmetric([float(r)], name=f"[-{r:.3g},{r:.3g}]")

    reports = []
    for a in radii:
        for b in radii:
            for c in radii:
                intervals = (interval(a), interval(b), interval(c))
                reports.append(inequality_checker.supermod_global(gamma, *intervals, reverse=True))
    return reports


def _gaussian_mixed2_negative(budget: int, seed: int) -> List[InequalityReport]:
    return mixed2_sign_scan(Gaussian(), tuple(np.linspace(0.5, 5.0, max(budget, 2))))


def _surface_monotonicity_radial_power(budget: int, seed: int) -> List[InequalityReport]:
    return target_sweep("surface_monotonicity_symmetric", budget=budget, seed=seed)


def _translated_pair(K, shift: Sequence[float]):
    """L a short segment at ``shift``: K + L is K moved by roughly ``shift``."""
    a = np.asarray(shift, dtype=float)
    b = a + np.array([-0.2, 0.2])
    return K, Segment(a=tuple(a.tolist()), b=tuple(b.tolist()), name=f"seg@({a[0]:g},{a[1]:g})")


def _surface_monotonicity_nonsymmetric(budget: int, seed: int) -> List[InequalityReport]:
    mu = RadialPower(p=2.0)
    reports = target_sweep("surface_monotonicity", budget=budget, seed=seed, mu=mu)
    # a body far from the origin pulled towards it loses |x|^2-weighted boundary
    K, L = _translated_pair(Polytope.box([1.5, 1.5], [2.5, 2.5], name="far_square"), [-2.0, -2.0])
    reports.append(inequality_checker.surface_monotonicity(mu, K, L))
    return reports


def _surface_monotonicity_gaussian(budget: int, seed: int) -> List[InequalityReport]:
    reports = target_sweep("surface_monotonicity", budget=budget, seed=seed)
    K, L = _translated_pair(Polytope.box([-0.5, -0.5], [0.5, 0.5], name="centered_square"), [2.5, 2.5])
    reports.append(inequality_checker.surface_monotonicity(Gaussian(), K, L))
    return reports


def _gaussian_radial_modularity(budget: int, seed: int) -> List[InequalityReport]:
    return [inequality_checker.radial_modularity(Gaussian(), 2)]


def _fails_both_directions(reports: List[InequalityReport]) -> bool:
    return all(
        r.details.get("profile") == "neither"
        and r.details.get("super_violations", 0) > 0
        and r.details.get("sub_violations", 0) > 0
        for r in reports
    )


def _gaussian_shifted_ruzsa(budget: int, seed: int) -> List[InequalityReport]:
    reports: List[InequalityReport] = []
    for (A,) in random_instances(_ORIGIN_POLYGONS, budget, 1, seed):
        reports.extend(inequality_checker.ruzsa_shifted_balls(Gaussian(), A, [1.0, 0.0]))
    return reports


def _log_submodularity(budget: int, seed: int) -> List[InequalityReport]:
    def constant(A, B, C):
        c = inequality_checker.bm_constant(A, B, C)
        return InequalityReport(
            name="bm_constant", lhs=c, rhs=EvalResult.exact(1.0 + 1e-6), relation=Relation.LE,
            measure="lebesgue", body_ids=[A.name, B.name, C.name],
        )

    reports = sweep(constant, random_instances(_POLYGONS, budget, 3, seed))
    dilates = max(1, budget // 6)
    for mu in (Gaussian(), RadialExp(family="power", q=1.5)):
        polygons = random_instances(_SYMMETRIC_POLYGONS, dilates, 1, seed + 1)
        for rng, (K,) in zip(instance_rngs(seed + 3, dilates), polygons):
            a, b, c = rng.uniform(0.2, 2.0, size=3)
            bodies = [geometry.scale(K, float(t)) for t in (a, b, c)]
            reports.extend(sweep(lambda A, B, C: inequality_checker.log_submodularity(mu, A, B, C), [tuple(bodies)]))
    local = sweep(
        lambda A, B, C: inequality_checker.log_submodularity_local(Lebesgue(), A, B, C),
        random_instances(_POLYGONS, dilates, 3, seed + 2),
    )
    return reports + local


def _arc_length_claim(budget: int, seed: int) -> List[InequalityReport]:
    rngs = instance_rngs(seed, budget)
    reports = [convexfn.arc_length_check(convexfn.random_convex_pl(rng)) for rng in rngs]

    for alpha in np.linspace(-3.0, 3.0, 61):
        check = convexfn.arc_length_check(convexfn.equality_family(float(alpha), 0.0, 1.0))
        label = f"alpha={alpha:.2f}"
        reports.append(_identity("equality_family", check.lhs, check.rhs, "lebesgue", [label], alpha=float(alpha)))

    for rng in rngs[: max(1, budget // 2)]:
        h = convexfn.random_convex_pl(rng, nonnegative=False, domain=(0.0, 1.0))
        base = convexfn.optimized_form_check(h)
        shifted = convexfn.optimized_form_check(h.shifted(float(rng.normal(scale=3.0))))
        reports.append(base)
        reports.append(_identity("optimized_translation", base.margin, shifted.margin, "lebesgue", []))
        gap = base.details["round_trip_gap"]
        reports.append(_identity("optimized_round_trip", gap, 0.0, "lebesgue", [], rtol=1e-9))

    for alpha in convexfn.PROBE_EXPONENTS:
        for beta in convexfn.PROBE_EXPONENTS:
            for lam in (0.5, 1.0, 10.0):
                for eps in (0.1, 0.5):
                    reports.append(convexfn.thin_rectangle_probe(alpha, beta, lam, eps))
    return reports


def _disk_flux(budget: int, seed: int) -> List[InequalityReport]:
    reports = []
    for rng in instance_rngs(seed, budget):
        v = rng.normal(size=2)
        x = rng.uniform(-2.0, 2.0, size=2)
        r = float(rng.uniform(0.1, 2.0))
        flux = disk_normal_flux(Lebesgue(), v, r, x)
        reports.append(_identity("disk_flux_lebesgue", flux, 0.0, "lebesgue", [], v=v.tolist(), r=r, x=x.tolist()))
    # grad gamma . e1 < 0 on the disk through (1, 0) normal to e1
    flux = disk_normal_flux(Gaussian(), [1.0, 0.0], 1.0, [1.0, 0.0])
    reports.append(
        InequalityReport(
            name="disk_flux_gaussian_nonzero", lhs=-flux, rhs=EvalResult.exact(0.0), relation=Relation.GE,
            measure="gaussian", details={"v": [1.0, 0.0], "r": 1.0, "x": [1.0, 0.0]},
        )
    )
    return reports


def _zonotope_decomposition(budget: int, seed: int) -> List[InequalityReport]:
    config = GeneratorConfig(family=BodyFamily.ZONOTOPE, body_class=BodyClass.CONTAINS_ORIGIN)
    U = geometry.direction_net(2, 360)
    reports = []
    for (Z,) in random_instances(config, budget, 1, seed):
        segments = geometry.zonotope_origin_decomposition(Z)
        total = geometry.minkowski_combination([(1.0, s) for s in segments])
        gap = float(np.max(np.abs(geometry.support(total, U) - geometry.support(Z, U))))
        reports.append(
            InequalityReport(
                name="zonotope_decomposition", lhs=EvalResult.exact(gap), rhs=EvalResult.exact(1e-9),
                relation=Relation.LE, measure="lebesgue", body_ids=[Z.name], details={"segments": len(segments)},
            )
        )
    return reports


CLAIMS: Dict[str, Claim] = {
    c.claim_id: c
    for c in [
        Claim(
            "oracle-first-order",
            "mixed1 formula agrees with the FD oracle",
            Expectation.ALL_HOLD,
            50,
            _oracle_first_order,
        ),
        Claim(
            "classical-reductions",
            "Lebesgue mixed areas, perimeter and polarization",
            Expectation.ALL_HOLD,
            20,
            _classical_reductions,
        ),
        Claim(
            "homogeneity-radial-power",
            "homogeneity identities for |x|^2 and the 32/3 golden value",
            Expectation.ALL_HOLD,
            3,
            _homogeneity_radial_power,
        ),
        Claim(
            "bm-concavity",
            "Brunn-Minkowski 1/2-concavity of planar area",
            Expectation.ALL_HOLD,
            200,
            _concavity_sweep,
        ),
        Claim(
            "minkowski-lebesgue",
            "Minkowski first and second inequality for area",
            Expectation.ALL_HOLD,
            100,
            _minkowski_lebesgue,
        ),
        Claim(
            "gaussian-minkowski-second",
            "Gaussian Minkowski second inequality on symmetric bodies",
            Expectation.ALL_HOLD,
            100,
            _gaussian_minkowski_second,
        ),
        Claim(
            "reverse-quadratic",
            "reverse quadratic inequality, Lebesgue and Gaussian-symmetric",
            Expectation.ALL_HOLD,
            100,
            _reverse_quadratic,
        ),
        Claim("fenchel", "Fenchel bracket, Fenchel-type and classical bounds", Expectation.ALL_HOLD, 100, _fenchel),
        Claim(
            "lebesgue-supermodular",
            "the Lebesgue measure is supermodular",
            Expectation.ALL_HOLD,
            100,
            _lebesgue_supermodular,
        ),
        Claim(
            "gaussian-not-modular",
            "the Gaussian measure is neither super- nor submodular",
            Expectation.FINDS_VIOLATION,
            500,
            _gaussian_not_modular,
        ),
        Claim(
            "gaussian-interval-submodular",
            "the Gaussian measure on symmetric intervals is submodular",
            Expectation.ALL_HOLD,
            8000,
            _gaussian_interval_submodular,
        ),
        Claim(
            "gaussian-mixed2-negative",
            "gamma(R B; [-e1,e1], [-e1,e1]) < 0 for some R <= 5",
            Expectation.FINDS_VIOLATION,
            10,
            _gaussian_mixed2_negative,
        ),
        Claim(
            "surface-monotonicity-radial-power",
            "|x|^2 surface monotonicity for centrally symmetric L containing 0",
            Expectation.ALL_HOLD,
            200,
            _surface_monotonicity_radial_power,
        ),
        Claim(
            "surface-monotonicity-nonsymmetric",
            "|x|^2 surface monotonicity fails for unrestricted L",
            Expectation.FINDS_VIOLATION,
            200,
            _surface_monotonicity_nonsymmetric,
        ),
        Claim(
            "surface-monotonicity-gaussian",
            "Gaussian surface monotonicity fails for unrestricted L",
            Expectation.FINDS_VIOLATION,
            200,
            _surface_monotonicity_gaussian,
        ),
        Claim(
            "gaussian-radial-modularity",
            "Gaussian ball triples in the plane are neither super- nor submodular",
            Expectation.FINDS_VIOLATION,
            1,
            _gaussian_radial_modularity,
            accept=_fails_both_directions,
        ),
        Claim(
            "gaussian-shifted-ruzsa",
            "the weak Ruzsa form fails for Gaussian shifted balls",
            Expectation.FINDS_VIOLATION,
            5,
            _gaussian_shifted_ruzsa,
        ),
        Claim(
            "log-submodularity",
            "c(A,B,C) <= 1, dilates and the local form",
            Expectation.ALL_HOLD,
            300,
            _log_submodularity,
        ),
        Claim(
            "arc-length",
            "arc-length inequality, equality family, optimized form and probe",
            Expectation.ALL_HOLD,
            1000,
            _arc_length_claim,
        ),
        Claim(
            "disk-flux",
            "disk normal flux vanishes for Lebesgue, not for Gaussian",
            Expectation.ALL_HOLD,
            50,
            _disk_flux,
        ),
        Claim(
            "zonotope-decomposition",
            "origin zonotopes split into [0, v] segments",
            Expectation.ALL_HOLD,
            50,
            _zonotope_decomposition,
        ),
    ]
}


def expectation_met(expectation: Expectation, reports: List[InequalityReport], summary: SweepSummary) -> bool:
    if not reports:
        return False
    if expectation == Expectation.ALL_HOLD:
        return summary.is_healthy and summary.inconclusive_fraction < MAX_INCONCLUSIVE
    names = {r.name for r in reports}
    violated = {r.name for r in reports if r.verdict == Verdict.VIOLATED}
    return names == violated


def run_claim(
    claim_id: str, budget: Optional[int] = None, seed: Optional[int] = None, tolerance_scale: float = 1.0
) -> ClaimResult:
    """
    Run one registered claim.

    Raises:
        InvalidConfig: for an unknown claim id
    """
    if claim_id not in CLAIMS:
        raise InvalidConfig(f"Unknown claim {claim_id}", known=sorted(CLAIMS))
    claim = CLAIMS[claim_id]
    seed = settings.SEED if seed is None else seed
    reports = claim.run(budget or claim.budget, seed)
    for report in reports:
        report.claim_id = claim_id
        report.tolerance_scale = tolerance_scale
    summary = summarize(claim_id, reports)
    matched = expectation_met(claim.expectation, reports, summary)
    if claim.accept is not None:
        matched = matched and claim.accept(reports)
    log = logger.info if matched else logger.warning
    log("claim_finished", claim=claim_id, expectation=claim.expectation.value, matched=matched, reports=len(reports))
    return ClaimResult(claim=claim, reports=reports, summary=summary, matched=matched)


def run_all(
    budget: Optional[int] = None, seed: Optional[int] = None, tolerance_scale: float = 1.0
) -> List[ClaimResult]:
    return [run_claim(claim_id, budget, seed, tolerance_scale) for claim_id in CLAIMS]


def claim_table() -> List[dict]:
    return [
        {"claim_id": c.claim_id, "expectation": c.expectation.value, "budget": c.budget, "description": c.description}
        for c in CLAIMS.values()
    ]

