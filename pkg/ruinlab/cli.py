"""Command-line front end.

Every subcommand reads a JSON configuration (``--config``), applies dotted
``--set key=value`` overrides, runs, prints a short table on standard
output and writes a run directory under ``--out``.

Exit codes: 0 on success, 2 when the configuration does not validate,
1 on any other failure.
"""

import argparse
import logging
import math
import sys
from dataclasses import replace
from typing import Sequence

import numpy as np

from ._errors import (
    AlphaOutOfRange,
    InfiniteHorizonDivergent,
    MomentUnavailable,
    RuinLabError,
    SpecError,
    TailIntegralDiverges,
)
from .analytics import (
    beta_report,
    beta_T_classifier,
    certain_ruin_additive,
    certain_ruin_levy,
    find_beta_infinity,
    laplace_exponent,
)
from .bounds import (
    alpha_scan,
    bound_report,
    finite_time_bound,
    infinite_time_bound,
    moments,
    moments_from_samples,
)
from .config import (
    apply_overrides,
    experiment_from_config,
    load_config,
    novikov_from_config,
    options_from_config,
)
from .estimate import (
    bias_probe,
    certain_ruin_probe,
    functional_samples,
    mc_ruin_probability,
    slope_fit,
)
from .io import BOUND_COLUMNS, BoundRow, RunManifest, write_run
from .model import AdditiveIntegral, validate
from .simulate import cutoff_note, pathwise_violations, simulate_path

logger = logging.getLogger(__name__)

VALIDATE_PATHS = 100
SCAN_STEP = 0.25
SCAN_MAX = 10.0


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="Path to the JSON experiment configuration")
    common.add_argument("--out", default="runs", help="Directory for run outputs (default: ./runs)")
    common.add_argument("--seed", type=int, default=None,
                        help="Root seed; overrides mc.seed (default: mc.seed, else 42)")
    common.add_argument("--threads", type=int, default=None,
                        help="Worker processes (default: available cores)")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="Override a config entry by dotted path; repeatable")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG logging on standard error")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="ruinlab",
        description="Ruin probabilities of an insurer with risky investment: "
                    "Monte Carlo estimates, power-law bounds and critical exponents",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo ruin probability sweep over the capitals")
    p.add_argument("--bias-probe", action="store_true",
                   help="Re-run on a twofold refined grid and report the change in p_hat")
    p.add_argument("--dump-paths", type=int, default=0, metavar="K",
                   help="Write the first K simulated paths to paths/<k>.csv")

    p = sub.add_parser("bound", parents=[common], help="Power-law bound sweep against Monte Carlo")
    p.add_argument("--infinite", action="store_true", help="Infinite-horizon bound from closed-form moments")
    p.add_argument("--alpha-scan", action="store_true",
                   help="Report the grid exponent giving the smallest bound at each capital")

    sub.add_parser("beta", parents=[common], help="Critical exponents beta_T and beta_inf")
    sub.add_parser("slope", parents=[common], help="Log-log slope of the ruin probability")
    sub.add_parser("certain", parents=[common], help="Certain-ruin verdict with an optional Monte Carlo probe")
    sub.add_parser("validate", parents=[common], help="Validate the configuration and run the property checks")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.captureWarnings(True)


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _print_rows(header: Sequence[str], rows) -> None:
    print(",".join(header))
    for row in rows:
        print(",".join(_fmt(v) for v in row))


## Subcommands


def _cmd_simulate(args, spec, tree, manifest: RunManifest) -> int:
    estimates = mc_ruin_probability(spec, args.threads)
    manifest.estimates = estimates
    _print_rows(("y", "T", "p_hat", "ci_low", "ci_high", "n_ruined"),
                [(e.y, e.T, e.p_hat, e.ci_low, e.ci_high, e.n_ruined) for e in estimates])
    if args.bias_probe:
        probes = bias_probe(spec, args.threads)
        manifest.reports["bias_probe"] = [p.to_dict() for p in probes]
        for p in probes:
            print(f"bias probe y={_fmt(p.y)}: p_hat {_fmt(p.p_hat)} -> {_fmt(p.p_hat_refined)} (delta {_fmt(p.delta)})")
    paths = {k: simulate_path(spec, k) for k in range(min(args.dump_paths, spec.n_paths))}
    write_run(manifest, args.out, paths)
    return 0


def _bound_finite(args, spec, K, manifest: RunManifest) -> None:
    beta_T = beta_T_classifier(spec.returns, spec.grid.T)
    manifest.reports["beta_T"] = beta_T.to_dict()
    alphas = spec.alpha_list
    scan = ()
    if args.alpha_scan:
        top = min(SCAN_MAX, beta_T.value) if beta_T.value else SCAN_MAX
        scan = tuple(float(a) for a in np.arange(SCAN_STEP, top, SCAN_STEP))
        spec = replace(spec, alpha_list=tuple(sorted(set(spec.alpha_list) | set(scan))))
    samples = functional_samples(spec, args.threads)
    estimates = mc_ruin_probability(spec, args.threads)
    manifest.estimates = estimates
    by_y = {e.y: e for e in estimates}

    reports, skipped = {}, {}
    for alpha in alphas:
        try:
            report = bound_report(spec.business, moments_from_samples(samples, alpha), K)
            values = [finite_time_bound(report, y, beta_T.value) for y in spec.initial_capitals]
        except (AlphaOutOfRange, MomentUnavailable, TailIntegralDiverges) as err:
            logger.warning("alpha=%g skipped: %s", alpha, err)
            skipped[str(alpha)] = str(err)
            continue
        reports[str(alpha)] = report.to_dict()
        for y, value in zip(spec.initial_capitals, values):
            manifest.bound_rows.append(BoundRow(y, alpha, value, by_y[y].p_hat, by_y[y].ci_high))
    manifest.reports["bound"] = {"horizon": spec.grid.T, "by_alpha": reports, "skipped": skipped}

    if scan:
        best = alpha_scan(spec.business, samples, spec.initial_capitals, scan, K, beta_T.value)
        manifest.reports["alpha_scan"] = [vars(p) for p in best]
        for p in best:
            print(f"alpha scan y={_fmt(p.y)}: alpha={_fmt(p.alpha)} bound={_fmt(p.bound)}")


def _bound_infinite(spec, K, manifest: RunManifest) -> None:
    beta_inf = find_beta_infinity(laplace_exponent(spec.returns))
    manifest.reports["beta_inf"] = beta_inf.to_dict()
    reports, skipped = {}, {}
    for alpha in spec.alpha_list:
        try:
            report = bound_report(spec.business, moments(spec.returns, math.inf, alpha), K)
            values = [infinite_time_bound(report, y, beta_inf.value) for y in spec.initial_capitals]
        except (AlphaOutOfRange, MomentUnavailable, InfiniteHorizonDivergent, TailIntegralDiverges) as err:
            logger.warning("alpha=%g skipped: %s", alpha, err)
            skipped[str(alpha)] = str(err)
            continue
        reports[str(alpha)] = report.to_dict()
        manifest.bound_rows.extend(BoundRow(y, alpha, v) for y, v in zip(spec.initial_capitals, values))
    manifest.reports["bound"] = {"horizon": math.inf, "by_alpha": reports, "skipped": skipped}


def _cmd_bound(args, spec, tree, manifest: RunManifest) -> int:
    K = novikov_from_config(tree)
    if args.infinite:
        _bound_infinite(spec, K, manifest)
    else:
        _bound_finite(args, spec, K, manifest)
    _print_rows(BOUND_COLUMNS,
                [(r.y, r.alpha, r.bound, r.mc_estimate, r.mc_ci_hi) for r in manifest.bound_rows])
    write_run(manifest, args.out)
    return 0


def _cmd_beta(args, spec, tree, manifest: RunManifest) -> int:
    report = beta_report(spec.returns, spec.grid.T)
    manifest.reports["beta"] = report.to_dict()
    for name, est in (("beta_T", report.beta_T), ("beta_inf", report.beta_inf)):
        print(f"{name} = {_fmt(est.value)} ({est.status}, {est.method})")
    for line in report.diagnostics:
        print(f"note: {line}")
    write_run(manifest, args.out)
    return 0


def _cmd_slope(args, spec, tree, manifest: RunManifest) -> int:
    options = options_from_config(tree)
    beta_ref = options.beta_ref
    if beta_ref is None:
        beta_T = beta_T_classifier(spec.returns, spec.grid.T)
        if beta_T.value is not None and math.isfinite(beta_T.value):
            beta_ref = beta_T.value
    estimates = mc_ruin_probability(spec, args.threads)
    manifest.estimates = estimates
    fit = slope_fit(estimates, beta_ref)
    manifest.reports["slope"] = fit.to_dict()
    write_run(manifest, args.out)
    print(f"slope = {_fmt(fit.slope)} +/- {_fmt(fit.slope_stderr)} ({sum(fit.used)} points)")
    if fit.gap is not None:
        print(f"-beta_ref = {_fmt(-fit.beta_ref)}, gap = {_fmt(fit.gap)}")
    return 0


def _cmd_certain(args, spec, tree, manifest: RunManifest) -> int:
    options = options_from_config(tree)
    if isinstance(spec.returns, AdditiveIntegral):
        report = certain_ruin_additive(spec.returns, spec.business, options.p, options.horizon)
    else:
        report = certain_ruin_levy(spec.returns, spec.business, options.p)
    manifest.reports["certain"] = report.to_dict()
    print(f"verdict: {report.verdict}")
    print(f"D = {_fmt(report.D)}")
    for note in report.notes:
        print(f"note: {note}")
    if options.probe_y is not None:
        estimates = certain_ruin_probe(spec, options.probe_y, options.probe_T, args.threads)
        manifest.estimates = estimates
        _print_rows(("y", "T", "p_hat", "ci_low", "ci_high"),
                    [(e.y, e.T, e.p_hat, e.ci_low, e.ci_high) for e in estimates])
    write_run(manifest, args.out)
    return 0


def _cmd_validate(args, spec, tree, manifest: RunManifest) -> int:
    problems = []
    for k in range(min(VALIDATE_PATHS, spec.n_paths)):
        problems.extend(f"path {k}: {v}" for v in pathwise_violations(simulate_path(spec, k)))
    try:
        psi = laplace_exponent(spec.returns)
    except RuinLabError:
        psi = None
    if psi is not None:
        upper = min(psi.alpha_max, 10.0)
        problems.extend(f"psi not convex near alpha={a:.6g}" for a in psi.convexity_violations(upper))
    manifest.reports["validate"] = {"paths_checked": min(VALIDATE_PATHS, spec.n_paths), "problems": problems}
    for line in problems:
        print(f"violation: {line}")
    print("ok" if not problems else f"{len(problems)} property violations")
    return 0 if not problems else 1


COMMANDS = {
    "simulate": _cmd_simulate,
    "bound": _cmd_bound,
    "beta": _cmd_beta,
    "slope": _cmd_slope,
    "certain": _cmd_certain,
    "validate": _cmd_validate,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, execute one subcommand and return the exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"mc.seed={args.seed}")
    try:
        tree = apply_overrides(load_config(args.config), overrides)
        if args.command == "validate":
            report = validate(tree)
            for d in report.diagnostics:
                print(f"error: {d.key}: {d.message}", file=sys.stderr)
            if not report.passed:
                return 2
            spec = report.spec
        else:
            spec = experiment_from_config(tree)
        options_from_config(tree)
        novikov_from_config(tree)
    except SpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    manifest = RunManifest(spec=spec, command=args.command, overrides=overrides)
    note = cutoff_note(spec.returns, spec.cutoff)
    if note is not None:
        manifest.reports["warnings"] = [note]
    logger.info("%s: run %s", args.command, manifest.run_id)
    try:
        return COMMANDS[args.command](args, spec, tree, manifest)
    except SpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (RuinLabError, OSError, ArithmeticError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
