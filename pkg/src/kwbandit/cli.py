"""Command-line driver.

Subcommands:

* ``verify`` - grid condition reports for every objective in the config
* ``run``    - execute the config, writing trace.csv and summary.csv
* ``sweep``  - run a sweep config, writing sweep_summary.csv and
               exponent_fit.csv
* ``bounds`` - evaluate the config's theoretical bound from parameters
               alone (``--check`` also simulates and verifies domination)

Exit codes: 0 success, 1 validation error, 2 runtime/IO error,
3 check failure (failed condition report or failed ``bounds --check``).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .conditions import verify_conditions
from .config import parse_config, parse_sweep
from .exceptions import ConfigValidationError, KWBanditError
from .montecarlo import regret_samples
from .runner import resolve_experiment, run_experiment, run_sweep

import numpy as np

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_CHECK_FAILED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kwbandit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="path to a JSON config document")
        p.add_argument("--seed", type=int, default=None, help="override the config's base_seed")
        p.add_argument("--replications", type=int, default=None, help="override the config's replications")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--threads", type=int, default=0, help="worker threads, 0 = auto")

    p_verify = sub.add_parser("verify", help="verify the declared objective-class constants on a grid")
    common(p_verify)
    p_verify.add_argument("--grid", type=int, default=16, help="grid points per axis (default 16)")

    p_run = sub.add_parser("run", help="run the experiment and write CSV artifacts")
    common(p_run)

    p_sweep = sub.add_parser("sweep", help="run a sweep and fit the scaling exponent")
    common(p_sweep)

    p_bounds = sub.add_parser("bounds", help="evaluate the theoretical bound, no simulation")
    common(p_bounds)
    p_bounds.add_argument(
        "--check",
        action="store_true",
        help="also run the Monte-Carlo estimate and fail (exit 3) unless mean - 3*SE <= bound",
    )
    return parser


def _threads(value: int) -> int:
    return os.cpu_count() or 1 if value == 0 else max(1, value)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _cmd_verify(args) -> int:
    cfg = parse_config(_read(args.config))
    objectives = cfg.build_objectives()
    all_hold = True
    for i, objective in enumerate(objectives):
        report = verify_conditions(objective, grid_points_per_axis=args.grid)
        print(f"objective[{i}] {report.describe()}")
        all_hold = all_hold and report.all_hold
    print("conditions: " + ("ALL HOLD" if all_hold else "FAILURES REPORTED"))
    return EXIT_OK if all_hold else EXIT_CHECK_FAILED


def _cmd_run(args) -> int:
    cfg = parse_config(_read(args.config))
    out_dir = args.out if args.out is not None else cfg.output
    result = run_experiment(
        cfg, out_dir=out_dir, seed=args.seed, replications=args.replications, threads=_threads(args.threads)
    )
    print(f"mean total regret: {result.mean_regret!r} (stderr {result.stderr_regret!r})")
    if result.bound is not None:
        print(f"bound {result.bound.name}: {result.bound.value!r}")
    print(f"wrote {result.trace_path} and {result.summary_path}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    sweep = parse_sweep(_read(args.config))
    out_dir = args.out if args.out is not None else sweep.base.output
    result = run_sweep(
        sweep, out_dir=out_dir, seed=args.seed, replications=args.replications, threads=_threads(args.threads)
    )
    for point in result.points:
        print(
            f"{result.axis}={point.value:g}: mean regret {point.mean_regret!r}, "
            f"normalized {point.normalized_regret!r}"
        )
    print(f"fitted exponent: slope={result.slope!r} r2={result.r_squared!r}")
    print(f"wrote {result.summary_path} and {result.exponent_path}")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    cfg = parse_config(_read(args.config))
    if args.seed is not None:
        cfg = replace(cfg, base_seed=int(args.seed))
    if args.replications is not None:
        cfg = replace(cfg, replications=int(args.replications))
    resolved = resolve_experiment(cfg)
    if resolved.bound is None:
        print(f"variant {cfg.algorithm.variant!r} has no theoretical bound to evaluate", file=sys.stderr)
        return EXIT_VALIDATION
    bound = resolved.bound
    print(f"bound {bound.name} = {bound.value!r}")
    for key, value in bound.terms:
        print(f"  term {key} = {value!r}")
    for key, value in bound.inputs:
        print(f"  input {key} = {value!r}")
    if not args.check:
        return EXIT_OK
    totals, _, _ = regret_samples(
        resolved.policy,
        resolved.env,
        resolved.noise,
        cfg.replications,
        cfg.base_seed,
        threads=_threads(args.threads),
    )
    mean = float(np.mean(totals))
    stderr = 0.0 if cfg.replications < 2 else float(np.std(totals, ddof=1) / np.sqrt(cfg.replications))
    floor = mean - 3.0 * stderr
    print(f"monte-carlo mean = {mean!r} (stderr {stderr!r}); mean - 3*SE = {floor!r}")
    if floor <= bound.value:
        print("check: PASS (bound dominates the empirical mean)")
        return EXIT_OK
    print("check: FAIL (empirical mean exceeds the bound beyond statistical tolerance)")
    return EXIT_CHECK_FAILED


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"verify": _cmd_verify, "run": _cmd_run, "sweep": _cmd_sweep, "bounds": _cmd_bounds}
    try:
        return handlers[args.command](args)
    except ConfigValidationError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except KWBanditError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
