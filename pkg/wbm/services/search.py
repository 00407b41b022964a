"""
Random convex bodies, ordered parallel sweeps and counterexample search.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from wbm.config import settings
from wbm.exceptions import BudgetExhausted, UnsupportedConfiguration, WBMError
from wbm.models.bodies import Ball, Polytope, Segment, Zonotope
from wbm.models.measures import Gaussian, RadialPower
from wbm.models.results import EvalResult
from wbm.models.runs import BodyClass, BodyFamily, GeneratorConfig, SearchDirection
from wbm.monitoring.verdicts import InequalityReport, Relation, Verdict
from wbm.services import geometry
from wbm.services.inequalities import inequality_checker
from wbm.services.mixed import mixed2_fd

logger = structlog.get_logger(__name__)

_MAX_REJECTIONS = 200


class BodyGenerator:
    """Draws random convex bodies satisfying a class predicate."""

    def __init__(self, config: Optional[GeneratorConfig] = None):
        self.config = config or GeneratorConfig()

    def sample(self, rng: np.random.Generator, name: Optional[str] = None):
        """
        Draw one body.

        Args:
            rng: Random generator owned by the caller
            name: Identifier echoed in reports

        Returns:
            A body of the configured family and class
        """
        cfg = self.config
        family = {
            BodyFamily.POLYGON: self._polygon,
            BodyFamily.ZONOTOPE: self._zonotope,
            BodyFamily.BALL: self._ball,
            BodyFamily.SEGMENT: self._segment,
            BodyFamily.INTERVAL: self._interval,
        }[cfg.family]
        body = family(rng, name)
        if cfg.dilation_range is not None:
            body = geometry.scale(body, float(rng.uniform(*cfg.dilation_range)))
        return body

    def _uniform(self, rng, size):
        return rng.uniform(-self.config.box, self.config.box, size=size)

    def _polygon(self, rng, name):
        cls = self.config.body_class
        for _ in range(_MAX_REJECTIONS):
            k = int(rng.integers(self.config.k_range[0], self.config.k_range[1] + 1))
            pts = self._uniform(rng, (k, 2))
            if cls in (BodyClass.SYMMETRIC, BodyClass.SYMMETRIC_ABOUT_CENTER_CONTAINS_ORIGIN):
                pts = np.vstack([pts, -pts])
            body = Polytope.from_points(pts, name=name)
            if geometry.affine_dimension(body) < 2:
                continue
            if cls == BodyClass.SYMMETRIC_ABOUT_CENTER_CONTAINS_ORIGIN:
                V = geometry.vertices(body)
                x = rng.uniform(0.0, 0.9) * V[rng.integers(len(V))]
                return Polytope.from_points(geometry.vertices(body) - x, name=name)
            if cls == BodyClass.CONTAINS_ORIGIN:
                net = geometry.direction_net(2)
                if np.any(geometry.support(body, -net) < 0):
                    continue
            return body
        raise UnsupportedConfiguration("Polygon generator rejected every sample", k_range=self.config.k_range)

    def _zonotope(self, rng, name):
        cfg = self.config
        m = int(rng.integers(cfg.m_range[0], cfg.m_range[1] + 1))
        gens = self._uniform(rng, (m, cfg.dim))
        if cfg.body_class == BodyClass.SYMMETRIC:
            center = np.zeros(cfg.dim)
        elif cfg.body_class == BodyClass.ANY:
            center = self._uniform(rng, cfg.dim)
        else:
            # center = -sum lambda_i g_i with |lambda_i| < 1 keeps 0 inside
            center = -rng.uniform(-0.9, 0.9, size=m) @ gens
        return Zonotope(center=tuple(center.tolist()), generators=tuple(map(tuple, gens.tolist())), name=name)

    def _ball(self, rng, name):
        cfg = self.config
        radius = float(rng.uniform(*cfg.radius_range))
        if cfg.body_class == BodyClass.SYMMETRIC:
            center = np.zeros(cfg.dim)
        elif cfg.body_class == BodyClass.ANY:
            center = self._uniform(rng, cfg.dim)
        else:
            direction = rng.normal(size=cfg.dim)
            center = rng.uniform(0.0, 0.9) * radius * direction / np.linalg.norm(direction)
        return Ball(center=tuple(center.tolist()), radius=radius, name=name)

    def _segment(self, rng, name):
        cfg = self.config
        v = self._uniform(rng, cfg.dim)
        if cfg.body_class == BodyClass.SYMMETRIC:
            return Segment.symmetric(v.tolist(), name=name)
        if cfg.body_class == BodyClass.ANY:
            return Segment(a=tuple(self._uniform(rng, cfg.dim).tolist()), b=tuple(v.tolist()), name=name)
        lam = rng.uniform(0.0, 1.0)
        return Segment(a=tuple((-lam * v).tolist()), b=tuple(((1.0 - lam) * v).tolist()), name=name)

    def _interval(self, rng, name):
        cls = self.config.body_class
        box = self.config.box
        if cls == BodyClass.SYMMETRIC:
            a = float(rng.uniform(0.05, 1.0) * box)
            lo, hi = -a, a
        elif cls == BodyClass.ANY:
            lo, hi = np.sort(rng.uniform(-box, box, size=2))
        else:
            lo, hi = -rng.uniform(0.0, box), rng.uniform(0.0, box)
        return Polytope.from_points([[float(lo)], [float(hi)]], name=name)


# ----------------------------------------------------------------------
# Sweeps
# ----------------------------------------------------------------------


def instance_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """One independent stream per instance, independent of worker count."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def random_instances(config: GeneratorConfig, count: int, arity: int, seed: Optional[int] = None) -> List[Tuple]:
    """``count`` tuples of ``arity`` random bodies."""
    generator = BodyGenerator(config)
    seed = settings.SEED if seed is None else seed
    instances = []
    for i, rng in enumerate(instance_rngs(seed, count)):
        instances.append(tuple(generator.sample(rng, name=f"{config.family.value}{i}.{j}") for j in range(arity)))
    return instances


def parallel_map(fn: Callable, items: Sequence, max_workers: Optional[int] = None) -> List:
    """Map in a thread pool; results come back in input order."""
    workers = max_workers or settings.MAX_WORKERS
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _guarded(check: Callable[..., InequalityReport]) -> Callable[[Tuple], Optional[InequalityReport]]:
    def run(args):
        try:
            return check(*args)
        except WBMError as exc:
            logger.debug("instance_skipped", error=exc.error, description=exc.error_description)
            return None

    return run


def sweep(
    check: Callable[..., InequalityReport], instances: Sequence[Tuple], max_workers: Optional[int] = None
) -> List[InequalityReport]:
    """Run a checker over instances; instances raising a toolkit error are skipped."""
    return [r for r in parallel_map(_guarded(check), instances, max_workers) if r is not None]


# ----------------------------------------------------------------------
# Counterexample search
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SearchTarget:
    """A predicate to falsify: a checker, its default measure and instance builder."""

    name: str
    check: Callable[..., InequalityReport]
    measure: object
    config: GeneratorConfig
    arity: int = 3
    build: Optional[Callable[[np.random.Generator, BodyGenerator, int], Tuple]] = None


def _segment_pair_builder(rng, generator, index):
    A = generator.sample(rng, name=f"A{index}")
    theta = rng.uniform(0.0, np.pi)
    v = rng.uniform(0.5, 1.5) * np.array([np.cos(theta), np.sin(theta)])
    B = Segment.symmetric(v.tolist(), name=f"seg{index}")
    return A, B, B


def _origin_pair_builder(body_class: BodyClass, family: BodyFamily = BodyFamily.ZONOTOPE):
    def build(rng, generator, index):
        K = generator.sample(rng, name=f"K{index}")
        other = BodyGenerator(GeneratorConfig(family=family, body_class=body_class, dim=generator.config.dim))
        return K, other.sample(rng, name=f"L{index}")

    return build


def _mixed2_check(mu, A, B, C) -> InequalityReport:
    report = inequality_checker.supermod_local3(mu, A, B, C)
    report.name = "mixed2_negative"
    return report


_SYMMETRIC_POLYGONS = GeneratorConfig(
    family=BodyFamily.POLYGON, body_class=BodyClass.SYMMETRIC, dilation_range=(0.2, 2.5)
)
_POLYGONS = GeneratorConfig(family=BodyFamily.POLYGON)

SEARCH_TARGETS: Dict[str, SearchTarget] = {
    "supermod_global": SearchTarget(
        "supermod_global", inequality_checker.supermod_global, Gaussian(), _SYMMETRIC_POLYGONS
    ),
    "submod_global": SearchTarget(
        "submod_global",
        lambda mu, A, B, C: inequality_checker.supermod_global(mu, A, B, C, reverse=True),
        Gaussian(),
        _SYMMETRIC_POLYGONS,
    ),
    "mixed2_negative": SearchTarget(
        "mixed2_negative",
        _mixed2_check,
        Gaussian(),
        GeneratorConfig(family=BodyFamily.BALL, body_class=BodyClass.SYMMETRIC, radius_range=(0.5, 5.0)),
        build=_segment_pair_builder,
    ),
    "surface_monotonicity": SearchTarget(
        "surface_monotonicity", inequality_checker.surface_monotonicity, Gaussian(), _POLYGONS, arity=2,
        build=_origin_pair_builder(BodyClass.ANY),
    ),
    "surface_monotonicity_symmetric": SearchTarget(
        "surface_monotonicity_symmetric",
        inequality_checker.surface_monotonicity,
        RadialPower(p=2.0),
        _POLYGONS,
        arity=2,
        build=_origin_pair_builder(BodyClass.SYMMETRIC_ABOUT_CENTER_CONTAINS_ORIGIN),
    ),
    "log_submodularity": SearchTarget(
        "log_submodularity", inequality_checker.log_submodularity, Gaussian(), _SYMMETRIC_POLYGONS
    ),
    "conjecture_origin": SearchTarget(
        "conjecture_origin", inequality_checker.surface_monotonicity, Gaussian(), _POLYGONS, arity=2,
        build=_origin_pair_builder(BodyClass.CONTAINS_ORIGIN, BodyFamily.POLYGON),
    ),
}


def _target(target: str) -> SearchTarget:
    if target not in SEARCH_TARGETS:
        raise UnsupportedConfiguration(f"Unknown search target {target}", known=sorted(SEARCH_TARGETS))
    return SEARCH_TARGETS[target]


def target_sweep(
    target: str,
    config: Optional[GeneratorConfig] = None,
    budget: int = 500,
    seed: Optional[int] = None,
    mu=None,
    max_workers: Optional[int] = None,
) -> List[InequalityReport]:
    """Every classified report of a search target over ``budget`` random instances, in instance order."""
    spec = _target(target)
    generator = BodyGenerator(config or spec.config)
    mu = mu if mu is not None else spec.measure
    seed = settings.SEED if seed is None else seed

    instances = []
    for i, rng in enumerate(instance_rngs(seed, budget)):
        if spec.build is not None:
            instances.append(spec.build(rng, generator, i))
        else:
            instances.append(tuple(generator.sample(rng, name=f"b{i}.{j}") for j in range(spec.arity)))
    return sweep(lambda *bodies: spec.check(mu, *bodies), instances, max_workers)


def counterexample_search(
    target: str,
    config: Optional[GeneratorConfig] = None,
    budget: int = 500,
    seed: Optional[int] = None,
    mu=None,
    direction: SearchDirection = SearchDirection.VIOLATED,
    max_workers: Optional[int] = None,
) -> List[InequalityReport]:
    """
    Random search for instances whose verdict matches ``direction``.

    Args:
        target: Name in SEARCH_TARGETS
        config: Generator override; the target's default otherwise
        budget: Number of random instances
        seed: Master seed, split per instance
        mu: Measure override
        direction: Verdict sought (violations by default)

    Returns:
        Every matching report, in instance order

    Raises:
        BudgetExhausted: if no instance matches; this is not evidence of validity
    """
    reports = target_sweep(target, config, budget, seed, mu, max_workers)
    wanted = Verdict(direction.value)
    found = [r for r in reports if r.verdict == wanted]
    logger.info("search_finished", target=target, searched=budget, evaluated=len(reports), found=len(found))
    if not found:
        raise BudgetExhausted(
            f"No {wanted.value} instance for {target} within budget", searched=budget, reports=reports
        )
    return found


def mixed2_sign_scan(mu=None, radii: Sequence[float] = tuple(np.linspace(0.5, 5.0, 10))) -> List[InequalityReport]:
    """mu(R B_2^2; [-e1, e1], [-e1, e1]) >= 0 by finite differences over a radius grid."""
    mu = mu if mu is not None else Gaussian()
    B = Segment.symmetric([1.0, 0.0], name="[-e1,e1]")
    reports = []
    for R in radii:
        A = Ball.unit(2, radius=float(R), name=f"{float(R):g}B")
        value = mixed2_fd(mu, A, B, B)
        reports.append(
            InequalityReport(
                name="mixed2_negative", lhs=value, rhs=EvalResult.exact(0.0), relation=Relation.GE,
                measure=mu.label(), body_ids=[A.name, B.name, B.name], details={"R": float(R)},
            )
        )
    return reports