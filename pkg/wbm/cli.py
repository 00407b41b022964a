"""
Command-line entry point.

    wbm body     --body K.json [--direction 1 0]
    wbm measure  --measure gaussian --body box.json [--method qmc]
    wbm surface  --measure gaussian --body K.json [--records]
    wbm mixed    --measure gaussian --bodyA A.json --bodyB B.json [--bodyC C.json] --order 2 --path both
    wbm check    --inequality supermod_global --measure gaussian --bodies A.json B.json C.json
    wbm check    --inequality minkowski_second --measure lebesgue --family polygon --sweep 100
    wbm search   --target supermod_global --budget 500
    wbm convexfn --mode check --breakpoints 0 0.5 1 --values 1 0.2 0.7
    wbm repro    gaussian-not-modular | all | --list

Exit codes: 0 ok, 1 verdict mismatch (repro) or a failed computation, 2 invalid configuration.
"""

import argparse
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd
import structlog
from pydantic import ValidationError

from wbm import __version__
from wbm.config import WBMConstants, settings
from wbm.exceptions import (
    BudgetExhausted,
    DimensionMismatch,
    InvalidConfig,
    Negative,
    NotConvex,
    OriginNotContained,
    UnboundedBody,
    UnsupportedConfiguration,
    WBMError,
)
from wbm.logging_config import configure_logging
from wbm.models.bodies import load_body, parse_body
from wbm.models.concavity import power_or_log
from wbm.models.convexfn import ConvexPL
from wbm.models.measures import parse_measure
from wbm.models.results import EvalResult
from wbm.models.runs import BodyClass, BodyFamily, GeneratorConfig, RunConfig, SearchDirection
from wbm.monitoring.verdicts import InequalityReport, summarize
from wbm.repro import CLAIMS, claim_table, run_claim
from wbm.services import convexfn, geometry
from wbm.services.inequalities import concavity_spec, inequality_checker
from wbm.services.measures import concavity_class, measure
from wbm.services.mixed import homogeneity_suite, mixed1_fd, mixed1_formula, mixed2_fd, mixed2_formula
from wbm.services.search import SEARCH_TARGETS, counterexample_search, instance_rngs, random_instances, sweep
from wbm.services.surface import weighted_surface_area, weighted_surface_measure

logger = structlog.get_logger(__name__)

CONFIG_ERRORS = (
    InvalidConfig,
    UnsupportedConfiguration,
    DimensionMismatch,
    OriginNotContained,
    UnboundedBody,
    NotConvex,
    Negative,
)
AGREEMENT_RTOL = 1e-3


# ----------------------------------------------------------------------
# Inputs
# ----------------------------------------------------------------------


def load_measure(value: str):
    """A measure from a spec file, an inline JSON document or a bare type name."""
    path = Path(value)
    if path.is_file():
        return parse_measure(path.read_text())
    if value.lstrip().startswith("{"):
        return parse_measure(value)
    return parse_measure({"type": value})


def load_body_arg(value: str):
    """A body from a spec file or an inline JSON document."""
    if value.lstrip().startswith("{"):
        return parse_body(value)
    path = Path(value)
    if not path.is_file():
        raise InvalidConfig(f"Body file not found: {value}")
    return load_body(path)


def _concavity(args, mu, bodies):
    if args.concavity:
        return concavity_spec(args.concavity, args.s)
    return power_or_log(concavity_class(mu, bodies))


def _s_value(args, mu, bodies) -> float:
    return args.s if args.s is not None else concavity_class(mu, bodies)


# ----------------------------------------------------------------------
# Output
# ----------------------------------------------------------------------


def _header(config: RunConfig) -> Dict[str, Any]:
    header: Dict[str, Any] = {"wbm_version": __version__, "csv_version": WBMConstants.CSV_VERSION}
    header.update(config.header())
    header.update({f"settings.{k}": v for k, v in settings.snapshot().items()})
    header["generated_at"] = datetime.now(timezone.utc).isoformat()
    return header


def render(
    rows: List[Dict[str, Any]], columns: Sequence[str], config: RunConfig, summary: Optional[Dict[str, Any]] = None
) -> str:
    """CSV with a ``# key=value`` header, or one JSON document."""
    header = _header(config)
    if config.format == "json":
        payload: Dict[str, Any] = {"header": header, "rows": rows}
        if summary is not None:
            payload["summary"] = summary
        return json.dumps(payload, indent=2, default=str) + "\n"

    buffer = io.StringIO()
    for key, value in header.items():
        buffer.write(f"# {key}={value}\n")
    pd.DataFrame(rows, columns=list(columns)).to_csv(buffer, index=False, lineterminator="\n")
    if summary is not None:
        buffer.write("# summary " + " ".join(f"{k}={v}" for k, v in summary.items()) + "\n")
    return buffer.getvalue()


def emit(rows, columns, config: RunConfig, summary=None) -> None:
    text = render(rows, columns, config, summary)
    if config.out:
        Path(config.out).write_text(text)
        logger.info("report_written", path=config.out, rows=len(rows))
    else:
        sys.stdout.write(text)


def eval_row(quantity: str, mu_label: str, body_ids, result: EvalResult, agreement: Any = "") -> Dict[str, Any]:
    return {
        "quantity": quantity,
        "measure": mu_label,
        "body_ids": ";".join(body_ids),
        "value": result.value,
        "abs_error": result.abs_error,
        "method": result.method.value,
        "agreement_flag": agreement,
    }


def emit_reports(reports: List[InequalityReport], config: RunConfig, name: str) -> None:
    for report in reports:
        report.tolerance_scale = config.tolerance_scale
    summary = summarize(name, reports)
    counts = {
        "holds": summary.checks_passed,
        "violated": summary.checks_failed,
        "inconclusive": summary.inconclusive,
    }
    emit([r.to_row() for r in reports], WBMConstants.REPORT_COLUMNS, config, counts)


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------


def cmd_body(args, config: RunConfig) -> int:
    lam = parse_measure({"type": "lebesgue"})
    rows = []
    for value in args.body:
        body = load_body_arg(value)
        label = geometry.body_label(body)
        rows.append(eval_row("volume", "lebesgue", [label], measure(lam, body)))
        rows.append(eval_row("affine_dimension", "", [label], EvalResult.exact(geometry.affine_dimension(body))))
        rows.append(eval_row("symmetric", "", [label], EvalResult.exact(float(geometry.is_symmetric(body)))))
        rows.append(eval_row("contains_origin", "", [label], EvalResult.exact(float(geometry.contains_origin(body)))))
        V = geometry.vertices(body)
        if V is not None:
            rows.append(eval_row("vertex_count", "", [label], EvalResult.exact(len(V))))
        if args.direction:
            if len(args.direction) != body.dim:
                raise DimensionMismatch("Direction does not match the body dimension", dim=body.dim)
            support = EvalResult.exact(float(geometry.support(body, args.direction)))
            rows.append(eval_row("support", "", [label], support))
    emit(rows, WBMConstants.EVAL_COLUMNS, config)
    return WBMConstants.EXIT_OK


def cmd_measure(args, config: RunConfig) -> int:
    mu = load_measure(args.measure)
    method = None if args.method == "auto" else args.method
    rows = []
    for value in args.body:
        body = load_body_arg(value)
        result = measure(mu, body, method=method, seed=config.seed)
        rows.append(eval_row("measure", mu.label(), [geometry.body_label(body)], result))
    emit(rows, WBMConstants.EVAL_COLUMNS, config)
    return WBMConstants.EXIT_OK


def cmd_surface(args, config: RunConfig) -> int:
    mu = load_measure(args.measure)
    body = load_body_arg(args.body)
    label = geometry.body_label(body)
    if args.records:
        S = weighted_surface_measure(mu, body)
        rows = [
            {"body_ids": label, "normal": ";".join(f"{c!r}" for c in r["normal"]), "weight": r["weight"]}
            for r in S.to_records()
        ]
        emit(rows, ["body_ids", "normal", "weight"], config)
        return WBMConstants.EXIT_OK
    row = eval_row("weighted_surface_area", mu.label(), [label], weighted_surface_area(mu, body))
    emit([row], WBMConstants.EVAL_COLUMNS, config)
    return WBMConstants.EXIT_OK


def cmd_mixed(args, config: RunConfig) -> int:
    mu = load_measure(args.measure)
    A, B = load_body_arg(args.bodyA), load_body_arg(args.bodyB)
    bodies = [A, B]
    if args.order == 2:
        C = load_body_arg(args.bodyC) if args.bodyC else B
        bodies.append(C)
        formula_fn: Callable[[], EvalResult] = lambda: mixed2_formula(mu, A, B, C)  # noqa: E731
        fd_fn: Callable[[], EvalResult] = lambda: mixed2_fd(mu, A, B, C, seed=config.seed)  # noqa: E731
    else:
        formula_fn = lambda: mixed1_formula(mu, A, B)  # noqa: E731
        fd_fn = lambda: mixed1_fd(mu, A, B, seed=config.seed)  # noqa: E731
    ids = [geometry.body_label(b) for b in bodies]
    quantity = f"mixed{args.order}"

    rows = []
    if args.path == "both":
        formula, fd = formula_fn(), fd_fn()
        agrees = formula.agrees_with(fd, settings.VERDICT_SIGMA * config.tolerance_scale, AGREEMENT_RTOL)
        rows.append(eval_row(quantity, mu.label(), ids, formula, agrees))
        rows.append(eval_row(quantity, mu.label(), ids, fd, agrees))
    else:
        rows.append(eval_row(quantity, mu.label(), ids, formula_fn() if args.path == "formula" else fd_fn()))
    emit(rows, WBMConstants.EVAL_COLUMNS, config)
    return WBMConstants.EXIT_OK


def _shift(args, body) -> Tuple[float, ...]:
    """Shift direction for the shifted-ball family; e1 by default."""
    if args.shift is None:
        return tuple(1.0 if i == 0 else 0.0 for i in range(body.dim))
    if len(args.shift) != body.dim:
        raise DimensionMismatch("--shift must match the body dimension", shift=len(args.shift), dim=body.dim)
    if not any(args.shift):
        raise InvalidConfig("--shift must be nonzero")
    return tuple(args.shift)


def _dispatch(name: str) -> Tuple[int, Callable]:
    """(arity, fn(args, mu, bodies)) for a named inequality."""
    c = inequality_checker
    table: Dict[str, Tuple[int, Callable]] = {
        "f_concavity": (2, lambda a, mu, b: c.check_f_concavity(mu, _concavity(a, mu, b), *b)),
        "minkowski_first": (2, lambda a, mu, b: c.minkowski_first(mu, _concavity(a, mu, b), *b)),
        "minkowski_first_homogeneous": (2, lambda a, mu, b: c.minkowski_first_homogeneous(mu, *b)),
        "minkowski_second": (2, lambda a, mu, b: c.minkowski_second(mu, _concavity(a, mu, b), *b)),
        "reverse_quadratic": (3, lambda a, mu, b: c.reverse_quadratic(mu, _concavity(a, mu, b), *b)),
        "fenchel": (3, lambda a, mu, b: c.fenchel_bounds(mu, _s_value(a, mu, b), *b)),
        "minkowski_quadratic": (3, lambda a, mu, b: c.classical_minkowski_quadratic(*b)),
        "supermod_global": (3, lambda a, mu, b: c.supermod_global(mu, *b)),
        "submod_global": (3, lambda a, mu, b: c.supermod_global(mu, *b, reverse=True)),
        "supermod_local2": (3, lambda a, mu, b: c.supermod_local2(mu, *b)),
        "supermod_local3": (3, lambda a, mu, b: c.supermod_local3(mu, *b)),
        "supermod_consistency": (3, lambda a, mu, b: c.supermod_consistency(mu, *b)),
        "surface_monotonicity": (2, lambda a, mu, b: c.surface_monotonicity(mu, *b)),
        "dilation_convexity": (1, lambda a, mu, b: c.dilation_convexity(mu, *b)),
        "log_submodularity": (3, lambda a, mu, b: c.log_submodularity(mu, *b)),
        "log_submodularity_local": (3, lambda a, mu, b: c.log_submodularity_local(mu, *b, s0=a.s0, t0=a.t0)),
        "ruzsa": (3, lambda a, mu, b: c.ruzsa_check(mu, *b)),
        "ruzsa_shifted_balls": (1, lambda a, mu, b: c.ruzsa_shifted_balls(mu, b[0], _shift(a, b[0]))),
        "radial_modularity": (0, lambda a, mu, b: c.radial_modularity(mu, a.dim)),
        "homogeneity": (3, lambda a, mu, b: homogeneity_suite(mu, *b)),
    }
    if name not in table:
        raise InvalidConfig(f"Unknown inequality {name}", known=sorted(table))
    return table[name]


INEQUALITY_NAMES = (
    "f_concavity", "minkowski_first", "minkowski_first_homogeneous", "minkowski_second", "reverse_quadratic",
    "fenchel", "minkowski_quadratic", "supermod_global", "submod_global", "supermod_local2", "supermod_local3",
    "supermod_consistency", "surface_monotonicity", "dilation_convexity", "log_submodularity",
    "log_submodularity_local", "ruzsa", "ruzsa_shifted_balls", "radial_modularity", "homogeneity",
)


def cmd_check(args, config: RunConfig) -> int:
    mu = load_measure(args.measure)
    arity, fn = _dispatch(args.inequality)
    if arity == 0:
        if args.bodies:
            raise InvalidConfig(f"{args.inequality} takes no bodies; use --dim", given=len(args.bodies))
        instances = [()]
    elif args.bodies:
        bodies = tuple(load_body_arg(v) for v in args.bodies)
        if len(bodies) != arity:
            raise InvalidConfig(f"{args.inequality} takes {arity} bodies", given=len(bodies))
        instances = [bodies]
    else:
        generator = GeneratorConfig(
            family=BodyFamily(args.family), body_class=BodyClass(args.body_class), dim=args.dim
        )
        count = args.sweep or config.budget or 1
        instances = random_instances(generator, count, arity, config.seed)

    results = sweep(lambda *bodies: fn(args, mu, bodies), instances)
    reports: List[InequalityReport] = []
    for r in results:
        reports.extend(r if isinstance(r, list) else [r])
    emit_reports(reports, config, args.inequality)
    return WBMConstants.EXIT_OK


def cmd_search(args, config: RunConfig) -> int:
    mu = load_measure(args.measure) if args.measure else None
    try:
        reports = counterexample_search(
            args.target,
            budget=config.budget or 500,
            seed=config.seed,
            mu=mu,
            direction=SearchDirection(args.direction),
        )
    except BudgetExhausted as exc:
        emit_reports(list(exc.reports), config, args.target)
        _print_error(exc)
        return WBMConstants.EXIT_MISMATCH
    emit_reports(reports, config, args.target)
    return WBMConstants.EXIT_OK


def _pl_from_args(args, nonnegative: bool) -> List[ConvexPL]:
    if args.breakpoints:
        if not args.values or len(args.values) != len(args.breakpoints):
            raise InvalidConfig("--breakpoints and --values must have equal length")
        return [ConvexPL(breakpoints=tuple(args.breakpoints), values=tuple(args.values), nonnegative=nonnegative)]
    domain = None if nonnegative else (0.0, 1.0)
    return [
        convexfn.random_convex_pl(rng, nonnegative=nonnegative, domain=domain)
        for rng in instance_rngs(args.seed, args.random or 1)
    ]


def cmd_convexfn(args, config: RunConfig) -> int:
    mode = args.mode
    if mode == "check":
        reports = [convexfn.arc_length_check(h, args.a, args.b) for h in _pl_from_args(args, nonnegative=True)]
    elif mode == "weak":
        reports = [convexfn.arc_length_weak_check(h) for h in _pl_from_args(args, nonnegative=True)]
    elif mode == "optimized":
        reports = [convexfn.optimized_form_check(h) for h in _pl_from_args(args, nonnegative=False)]
    elif mode == "equality":
        a = 0.0 if args.a is None else args.a
        b = 1.0 if args.b is None else args.b
        reports = []
        for alpha in args.alpha or [0.0]:
            report = convexfn.arc_length_check(convexfn.equality_family(alpha, a, b))
            report.name = "equality_family"
            report.details["alpha"] = alpha
            reports.append(report)
    elif mode == "thin-rectangle":
        alpha = None if args.probe_alpha == "none" else int(args.probe_alpha)
        reports = [convexfn.thin_rectangle_probe(alpha, args.beta, lam, eps) for lam in args.lam for eps in args.eps]
    else:
        if not args.body:
            raise InvalidConfig("witness mode needs --body")
        reports = [convexfn.arclength_witness(load_body_arg(args.body), args.direction or (0.0, 1.0)).reduced_report()]
    emit_reports(reports, config, f"convexfn_{mode}")
    return WBMConstants.EXIT_OK


def cmd_repro(args, config: RunConfig) -> int:
    if args.list:
        emit(claim_table(), ["claim_id", "expectation", "budget", "description"], config)
        return WBMConstants.EXIT_OK
    if not args.claim:
        raise InvalidConfig("repro needs a claim id, 'all' or --list", known=sorted(CLAIMS))
    claim_ids = list(CLAIMS) if args.claim == "all" else [args.claim]
    if args.claim != "all" and args.claim not in CLAIMS:
        raise InvalidConfig(f"Unknown claim {args.claim}", known=sorted(CLAIMS))

    reports: List[InequalityReport] = []
    matched = True
    for claim_id in claim_ids:
        result = run_claim(claim_id, config.budget, config.seed, config.tolerance_scale)
        reports.extend(result.reports)
        matched = matched and result.matched
        if not result.matched:
            sys.stderr.write(json.dumps({"error": "verdict_mismatch", **result.to_dict()}) + "\n")
    emit_reports(reports, config, args.claim)
    return WBMConstants.EXIT_OK if matched else WBMConstants.EXIT_MISMATCH


COMMANDS = {
    "body": cmd_body,
    "measure": cmd_measure,
    "surface": cmd_surface,
    "mixed": cmd_mixed,
    "check": cmd_check,
    "search": cmd_search,
    "convexfn": cmd_convexfn,
    "repro": cmd_repro,
}


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.SEED, help=f"Master seed (default: {settings.SEED})")
    common.add_argument("--out", "-o", default=None, help="Output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format (default: csv)")
    common.add_argument("--budget", type=int, default=None, help="Search or sweep budget")
    common.add_argument("--tolerance-scale", type=float, default=1.0, help="Multiplier on verdict error budgets")
    common.add_argument("--log-level", default=None, help="Log level (default: settings.LOG_LEVEL)")

    parser = argparse.ArgumentParser(
        prog="wbm",
        description="Weighted Brunn-Minkowski toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("body", parents=[common], help="Structural facts about bodies")
    p.add_argument("--body", nargs="+", required=True, help="Body spec files")
    p.add_argument("--direction", type=float, nargs="+", help="Evaluate the support function here")

    p = sub.add_parser("measure", parents=[common], help="mu(K)")
    p.add_argument("--measure", required=True, help="Measure spec file, JSON or type name")
    p.add_argument("--body", nargs="+", required=True, help="Body spec files")
    p.add_argument("--method", choices=["auto", "qmc"], default="auto")

    p = sub.add_parser("surface", parents=[common], help="Weighted surface area or the surface measure")
    p.add_argument("--measure", required=True)
    p.add_argument("--body", required=True)
    p.add_argument("--records", action="store_true", help="Emit the weighted surface measure as {normal, weight} rows")

    p = sub.add_parser("mixed", parents=[common], help="mu(A;B) or mu(A;B,C)")
    p.add_argument("--measure", required=True)
    p.add_argument("--bodyA", required=True)
    p.add_argument("--bodyB", required=True)
    p.add_argument("--bodyC", default=None, help="Third body for order 2 (default: B)")
    p.add_argument("--order", type=int, choices=[1, 2], default=1)
    p.add_argument("--path", choices=["fd", "formula", "both"], default="both")

    p = sub.add_parser("check", parents=[common], help="Check an inequality")
    p.add_argument("--inequality", required=True, choices=INEQUALITY_NAMES)
    p.add_argument("--measure", required=True)
    p.add_argument("--bodies", nargs="+", help="Body spec files (otherwise random bodies)")
    p.add_argument("--family", choices=[f.value for f in BodyFamily], default=BodyFamily.POLYGON.value)
    p.add_argument("--body-class", choices=[c.value for c in BodyClass], default=BodyClass.ANY.value)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--sweep", type=int, default=None, help="Number of random instances")
    p.add_argument("--concavity", choices=["power", "log", "normal_inv"], default=None)
    p.add_argument("--s", type=float, default=None, help="Concavity exponent")
    p.add_argument("--s0", type=float, default=0.0)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--shift", type=float, nargs="+", default=None, help="Shift direction for ruzsa_shifted_balls")

    p = sub.add_parser("search", parents=[common], help="Counterexample search")
    p.add_argument("--target", required=True, choices=sorted(SEARCH_TARGETS))
    p.add_argument("--measure", default=None, help="Override the target's measure")
    p.add_argument("--direction", choices=[d.value for d in SearchDirection], default=SearchDirection.VIOLATED.value)

    p = sub.add_parser("convexfn", parents=[common], help="Convex-function inequality lab")
    p.add_argument(
        "--mode", choices=["check", "weak", "equality", "optimized", "thin-rectangle", "witness"], default="check"
    )
    p.add_argument("--breakpoints", type=float, nargs="+")
    p.add_argument("--values", type=float, nargs="+")
    p.add_argument("--random", type=int, default=None, help="Number of random PL instances")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--alpha", type=float, nargs="+", help="Equality family slopes")
    p.add_argument("--probe-alpha", default="1", choices=["none", "1", "2", "3"])
    p.add_argument("--beta", type=int, choices=[1, 2, 3], default=1)
    p.add_argument("--lam", type=float, nargs="+", default=[1.0])
    p.add_argument("--eps", type=float, nargs="+", default=[0.1])
    p.add_argument("--body", default=None, help="Planar body for witness mode")
    p.add_argument("--direction", type=float, nargs=2, default=None)

    p = sub.add_parser("repro", parents=[common], help="Reproduce a registered claim")
    p.add_argument("claim", nargs="?", help="Claim id or 'all'")
    p.add_argument("--list", action="store_true", help="List registered claims")
    return parser


def _print_error(exc: WBMError) -> None:
    sys.stderr.write(json.dumps(exc.to_dict()) + "\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run the subcommand and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(args.log_level)
    try:
        config = RunConfig(
            subcommand=args.subcommand,
            seed=args.seed,
            out=args.out,
            format=args.format,
            budget=args.budget,
            tolerance_scale=args.tolerance_scale,
        )
        logger.debug("run_started", **config.header())
        return COMMANDS[args.subcommand](args, config)
    except ValidationError as exc:
        _print_error(InvalidConfig("Invalid configuration", errors=[e["msg"] for e in exc.errors()]))
        return WBMConstants.EXIT_INVALID_CONFIG
    except CONFIG_ERRORS as exc:
        _print_error(exc)
        return WBMConstants.EXIT_INVALID_CONFIG
    except WBMError as exc:
        _print_error(exc)
        return WBMConstants.EXIT_MISMATCH


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
