"""growth-lab command line.

Usage:
    python main.py analyze --expr "exp(z^2)" --rmin 10 --rmax 1e6 --points 24
    python main.py verify --instance eg2.json --radii 1,2,5
    python main.py corpus --jobs 8
    python main.py lemmas --expr "exp(z^2)" --theta 0
    python main.py sets --set 1:10 --set 5:100 --op union

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage or
configuration errors (diagnostics go to stderr).
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from app_logging.report_writer import emit_report, to_csv, to_json
from app_logging.setup import configure_logging
from config.constants import (
    DEFAULT_LEMMA_POINTS,
    DEFAULT_LEMMA_RMAX,
    DEFAULT_LEMMA_RMIN,
    DEFAULT_RESIDUAL_RADII,
    ERROR_USAGE,
)
from config.paths import OUTPUT_DIR
from config.settings import AppSettings, get_app_settings
from controllers.corpus_runner import SUMMARY_HEADER, CorpusRunner
from core.errors import ConfigError, EstimationError, ExprParseError, GrowthLabError, PreconditionError
from core.expr import Expr
from core.parser import parse
from corpus.entries import load_corpus
from growth.estimators import (
    convergence_exponent,
    hyper_order_from_samples,
    order_estimate,
    order_from_samples,
    sample_log_max_modulus,
    validate_grid,
)
from growth.profile import PROFILE_HEADER, build_profile
from indicator.phase import ExpPolyFactorization, default_directions, lemma2_sweep
from odelab.classify import HypothesisClassifier
from odelab.lemmas import LemmaCheckConfig, gundersen_check, kwon_check, wang_laine_check
from odelab.residual import residual_sweep
from radial.sets import (
    RadialSet,
    complement_within,
    intersect,
    log_density_profile,
    log_measure,
    tail_density,
    union,
)
from storage.instances import load_instance

logger = logging.getLogger("growth_lab.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

RESIDUAL_HEADER = ("r", "theta", "max_rel")
PLOT_HEADER = ("ln_r", "ln_ln_M")
SET_OPERATIONS = ("union", "intersect", "complement", "measure", "density")


class _ArgumentParser(argparse.ArgumentParser):
    """Raises instead of exiting so cli_main can map usage errors to exit code 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ConfigError(ERROR_USAGE.format(details=message))


def _float_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from exc
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _interval_list(text: str) -> list[tuple[float, float]]:
    intervals = []
    for part in text.split(","):
        try:
            lo, hi = part.split(":")
            intervals.append((float(lo), float(hi)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"expected intervals like 1:10,20:30, got '{text}'") from exc
    return intervals


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--radii", type=_float_list, help="Comma-separated radii (overrides --rmin/--rmax/--points)")
    parser.add_argument("--rmin", type=float, help="Smallest radius of the log-spaced grid")
    parser.add_argument("--rmax", type=float, help="Largest radius of the log-spaced grid")
    parser.add_argument("--points", type=int, help="Number of grid radii")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out", type=Path, nargs="?", const=OUTPUT_DIR, help="Directory for JSON/CSV reports (default: reports/)"
    )
    parser.add_argument("--format", choices=["json", "csv"], default="json", help="Format printed on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="growth-lab", description="Growth of entire functions and linear ODE examples")
    parser.add_argument("--log-dir", type=Path, help="Directory for growth_lab.log")
    parser.add_argument("--log-level", help="Log level for the log file")
    subparsers = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)

    analyze = subparsers.add_parser("analyze", help="Growth profile and order estimates of one expression")
    analyze.add_argument("--expr", required=True, help="Expression in z, e.g. exp(z^2)")
    analyze.add_argument("--zeros", action="store_true", help="Add n, N and the convergence exponent")
    analyze.add_argument("--angular-samples", type=int, help="Samples per circle for M(r)")
    _add_grid_flags(analyze)
    _add_output_flags(analyze)

    verify = subparsers.add_parser("verify", help="Residual check and hypothesis classification of an instance")
    verify.add_argument("--instance", type=Path, required=True, help="Instance JSON file")
    verify.add_argument("--tolerance", type=float, help="Residual tolerance")
    _add_grid_flags(verify)
    _add_output_flags(verify)

    corpus = subparsers.add_parser("corpus", help="Run every shipped example")
    corpus.add_argument("--corpus", type=Path, help="Corpus JSON (defaults to the shipped examples)")
    corpus.add_argument("--tolerance", type=float, help="Residual tolerance")
    corpus.add_argument("--jobs", type=int, help="Worker processes")
    _add_output_flags(corpus)

    lemmas = subparsers.add_parser("lemmas", help="Logarithmic-derivative, Kwon, Wang-Laine and indicator checks")
    lemmas.add_argument("--expr", help="Function to check (defaults to the corpus solutions)")
    lemmas.add_argument("--instance", type=Path, help="Instance whose factorization drives the indicator check")
    lemmas.add_argument("--theta", type=float, action="append", help="Direction for the indicator check")
    lemmas.add_argument("--epsilon", type=float, default=0.1, help="Epsilon of the bounds")
    lemmas.add_argument("--pair", action="append", help="Derivative pair k:j (repeatable)")
    lemmas.add_argument("--c", type=float, default=0.5, help="Exponent constant C of the Wang-Laine bound")
    lemmas.add_argument("--l0", type=float, default=0.1, help="Half-width of the Wang-Laine arc")
    _add_grid_flags(lemmas)
    _add_output_flags(lemmas)

    sets = subparsers.add_parser("sets", help="Radial-set calculator")
    sets.add_argument("--set", dest="sets", type=_interval_list, action="append", required=True)
    sets.add_argument("--op", choices=SET_OPERATIONS, default="measure")
    sets.add_argument("--lo", type=float, help="Lower end for complement")
    sets.add_argument("--hi", type=float, help="Upper end for complement")
    _add_grid_flags(sets)
    _add_output_flags(sets)
    return parser


def _grid(args: argparse.Namespace, rmin: float, rmax: float, points: int) -> list[float]:
    if args.radii:
        return list(args.radii)
    return _log_grid(args, rmin, rmax, points)


def _log_grid(args: argparse.Namespace, rmin: float, rmax: float, points: int) -> list[float]:
    lo = args.rmin if args.rmin is not None else rmin
    hi = args.rmax if args.rmax is not None else rmax
    count = args.points if args.points is not None else points
    if not (0 < lo < hi) or count < 2:
        raise ConfigError(ERROR_USAGE.format(details="grid needs 0 < rmin < rmax and at least 2 points"))
    return [float(r) for r in np.geomspace(lo, hi, count)]


def _parse_expr(text: str) -> Expr:
    try:
        return parse(text)
    except ExprParseError as exc:
        raise ConfigError(ERROR_USAGE.format(details=str(exc))) from exc


def _emit(args: argparse.Namespace, name: str, results, tables: dict, stdout_csv: str | None = None) -> None:
    if args.out:
        emit_report(results, args.out, name, csv_tables=tables)
    if args.format == "csv" and stdout_csv is not None:
        sys.stdout.write(stdout_csv)
    else:
        sys.stdout.write(to_json(results))


def cmd_analyze(args: argparse.Namespace, settings: AppSettings) -> int:
    f = _parse_expr(args.expr)
    grid = validate_grid(_grid(args, settings.order_rmin, settings.order_rmax, settings.order_points))
    samples_count = args.angular_samples or settings.angular_samples
    samples = sample_log_max_modulus(f, grid, samples_count)
    order = order_from_samples(samples, settings.envelope_band, settings.order_threshold)
    try:
        hyper = hyper_order_from_samples(samples, settings.envelope_band)
    except EstimationError as exc:
        logger.warning("hyper-order unavailable: %s", exc)
        hyper = None
    results = {"expression": str(f), "order": order, "hyper_order": hyper}
    profile_radii = list(samples.radii)
    if args.zeros:
        results["convergence_exponent"] = convergence_exponent(f, grid, settings.envelope_band)
    profile = build_profile(f, profile_radii, samples_count, with_zeros=args.zeros)
    results["profile_warnings"] = profile.warnings
    tables = {
        "profile": (PROFILE_HEADER, [_profile_row(row) for row in profile.rows]),
        "plot": (PLOT_HEADER, profile.plot_rows()),
    }
    _emit(args, "analyze", results, tables, profile.to_csv())
    return EXIT_OK


def _profile_row(row) -> tuple:
    return (row.r, row.log_m, row.theta_r, row.m, row.n, row.counting, row.t)


def cmd_verify(args: argparse.Namespace, settings: AppSettings) -> int:
    inst = load_instance(args.instance)
    tolerance = args.tolerance if args.tolerance is not None else settings.residual_tolerance
    radii = list(args.radii) if args.radii else list(DEFAULT_RESIDUAL_RADII)
    classifier = HypothesisClassifier(
        _log_grid(args, settings.order_rmin, settings.order_rmax, settings.order_points),
        [float(r) for r in np.geomspace(settings.zero_rmin, settings.zero_rmax, settings.zero_points)],
        tolerance=settings.order_tolerance,
        band=settings.envelope_band,
        threshold=settings.order_threshold,
    )
    report = classifier.classify(inst)
    results: dict = {"instance": inst.label, "report": report, "residuals": [], "verdict": None}
    passed = report.hyper_order_bound is not False
    rows = []
    if inst.f is not None:
        rows = residual_sweep(inst, inst.f, radii, settings.residual_angular_samples)
        results["residuals"] = [row._asdict() for row in rows]
        residual_ok = all(row.max_rel <= tolerance for row in rows)
        results["residual_pass"] = residual_ok
        passed = passed and residual_ok
        try:
            results["verdict"] = classifier.prop_ordbig_check(inst, report, tolerance)
        except PreconditionError as exc:
            results["verdict"] = {"error": str(exc)}
            passed = False
    results["passed"] = passed
    residual_rows = [(row.r, row.theta, row.max_rel) for row in rows]
    table = (RESIDUAL_HEADER, residual_rows)
    _emit(args, "verify", results, {"residuals": table}, to_csv(*table))
    return EXIT_OK if passed else EXIT_FAILED


def cmd_corpus(args: argparse.Namespace, settings: AppSettings) -> int:
    tolerance = args.tolerance if args.tolerance is not None else settings.residual_tolerance
    jobs = args.jobs if args.jobs is not None else settings.jobs
    summary = CorpusRunner(jobs).run(tolerance, args.corpus)
    table = (SUMMARY_HEADER, summary.csv_rows())
    _emit(args, "corpus", summary, {"summary": table}, to_csv(*table))
    return EXIT_OK if summary.passed else EXIT_FAILED


def _pairs(values: Sequence[str] | None) -> list[tuple[int, int]]:
    if not values:
        return [(1, 0)]
    pairs = []
    for value in values:
        try:
            k, j = value.split(":")
            pairs.append((int(k), int(j)))
        except ValueError as exc:
            raise ConfigError(ERROR_USAGE.format(details=f"pair must look like k:j, got '{value}'")) from exc
    return pairs


def _finite_order(f: Expr, settings: AppSettings) -> float | None:
    grid = [float(r) for r in np.geomspace(settings.order_rmin, settings.order_rmax, settings.order_points)]
    estimate = order_estimate(f, grid, settings.angular_samples, settings.envelope_band, settings.order_threshold)
    return estimate.value if estimate.is_finite else None


def _factorizations(args: argparse.Namespace) -> list[ExpPolyFactorization]:
    if args.instance:
        inst = load_instance(args.instance)
        return [inst.factorization_A] if inst.factorization_A else []
    seen: dict[str, ExpPolyFactorization] = {}
    for entry in load_corpus():
        factorization = entry.instance.factorization_A
        if factorization is not None:
            seen.setdefault(str(factorization.to_expr()), factorization)
    return list(seen.values())


def cmd_lemmas(args: argparse.Namespace, settings: AppSettings) -> int:
    cfg = LemmaCheckConfig.create(gamma=_pairs(args.pair), epsilon=args.epsilon, c=args.c, l0=args.l0)
    grid = _grid(args, DEFAULT_LEMMA_RMIN, DEFAULT_LEMMA_RMAX, DEFAULT_LEMMA_POINTS)
    if args.expr:
        functions = [_parse_expr(args.expr)]
    else:
        functions = [entry.instance.f for entry in load_corpus() if entry.instance.f is not None]
        functions = list({str(f): f for f in functions}.values())

    results: dict = {"functions": [], "indicator": []}
    passed = True
    for f in functions:
        rho_hat = _finite_order(f, settings)
        gundersen = gundersen_check(f, cfg, rho_hat, grid)
        kwon = kwon_check(f, grid, cfg.r0)
        wang_laine = wang_laine_check(f, cfg, grid)
        results["functions"].append(
            {"expression": str(f), "gundersen": gundersen, "kwon": kwon, "wang_laine": wang_laine}
        )
        passed = passed and gundersen.passed and kwon.pass_from is not None and wang_laine.passed

    for factorization in _factorizations(args):
        thetas = args.theta or default_directions(factorization.poly)
        for report in lemma2_sweep(factorization, thetas, [args.epsilon], grid):
            results["indicator"].append({"A": str(factorization.to_expr()), "check": report})
            passed = passed and report.passed
    results["passed"] = passed
    _emit(args, "lemmas", results, {})
    return EXIT_OK if passed else EXIT_FAILED


def cmd_sets(args: argparse.Namespace, settings: AppSettings) -> int:
    operands = [RadialSet(tuple(intervals)) for intervals in args.sets]
    results: dict = {"op": args.op, "operands": operands}
    if args.op == "union":
        result = operands[0]
        for other in operands[1:]:
            result = union(result, other)
        results["result"] = result
    elif args.op == "intersect":
        result = operands[0]
        for other in operands[1:]:
            result = intersect(result, other)
        results["result"] = result
    elif args.op == "complement":
        if args.lo is None or args.hi is None:
            raise ConfigError(ERROR_USAGE.format(details="complement needs --lo and --hi"))
        result = complement_within(operands[0], args.lo, args.hi)
        results["result"] = result
    elif args.op == "measure":
        result = operands[0]
    else:
        result = operands[0]
        top = max(hi for _, hi in result.intervals) if result.intervals else math.e
        grid = _grid(args, math.e, max(top, math.e * 10), 50)
        profile = log_density_profile(result, grid)
        upper, lower = tail_density(profile)
        results.update({"radii": grid, "density_profile": profile, "upper_density": upper, "lower_density": lower})
    results["log_measure"] = log_measure(result)
    rows = [(lo, hi) for lo, hi in result.intervals]
    _emit(args, "sets", results, {"intervals": (("lo", "hi"), rows)}, to_csv(("lo", "hi"), rows))
    return EXIT_OK


_COMMANDS = {
    "analyze": cmd_analyze,
    "verify": cmd_verify,
    "corpus": cmd_corpus,
    "lemmas": cmd_lemmas,
    "sets": cmd_sets,
}


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        if not args.command:
            parser.print_usage(sys.stderr)
            raise ConfigError(ERROR_USAGE.format(details="a subcommand is required"))
        settings = get_app_settings()
        configure_logging(args.log_level or settings.log_level, args.log_dir or settings.log_dir)
        if getattr(args, "out", None) is None and settings.output_dir is not None:
            args.out = settings.output_dir
        return _COMMANDS[args.command](args, settings)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ConfigError, ExprParseError, PreconditionError) as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except GrowthLabError as exc:
        logger.error("%s", exc)
        sys.stderr.write(f"{exc}\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(cli_main())
