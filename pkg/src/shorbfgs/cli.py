"""Command-line interface.

Subcommands:
  separate    run a separation algorithm on an instance, write its trace
  minimize    run a minimization loop on an instance, write its trace
  experiment  reproduce a figure's data as CSV files

Instances are given either by the mini-language ``family:key=value,...``
(e.g. ``simplex:eps=1e-3``, ``segment:c=1,0;d=0,1``) or by ``@file.json``
holding {"family": ..., "params": {...}, "seed": ...}.

Exit codes: 0 on a successful terminal outcome (separated, membership
certified, step vanished, descent, converged); 2 on max-iterations; 3 on
curvature failure; 64 on usage errors.
"""
from __future__ import annotations

import argparse
import os
import re
import sys

import numpy as np

from . import instances as inst
from .experiments import FIGURES, run_experiment
from .minimizers import (
    fixed_point_bfgs_descent,
    fixed_point_bfgs_nonsmooth,
    linesearch_free_bfgs,
)
from .oracles import FiniteSetOracle
from .separators import (
    bfgs_separate,
    bfgs_separate_hull,
    cholesky_bfgs_separate,
    ellipsoid_separate,
    randomized_shor_separate,
    segment_separate,
    shor_separate,
    shor_separate_ellipsoid,
    unit_ball_iteration,
)
from .trace import (
    MinimizerConfig,
    Outcome,
    RunTrace,
    SeparatorConfig,
    SUCCESS_OUTCOMES,
)

USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(USAGE_EXIT)


def parse_instance(text: str) -> inst.InstanceSpec:
    """Parse ``family:key=value,...`` or ``@file.json``."""
    if text.startswith("@"):
        return inst.InstanceSpec.load(text[1:])
    family, _, rest = text.partition(":")
    params: dict = {}
    seed = 0
    if rest:
        for chunk in rest.split(";"):
            pieces = chunk.split(",")
            if all("=" in piece for piece in pieces):
                pairs = pieces
            else:
                pairs = [chunk]  # commas belong to a list-valued entry
            for pair in pairs:
                if "=" not in pair:
                    raise ValueError(f"bad instance parameter {pair!r}")
                key, _, value = pair.partition("=")
                if key == "seed":
                    seed = int(value)
                else:
                    params[key.strip()] = _parse_value(value)
    return inst.InstanceSpec(family=family, params=params, seed=seed)


def _parse_value(value: str):
    range_match = re.fullmatch(r"(\d+)-(\d+)", value)
    if range_match:  # e.g. exponents=0-4
        return list(range(int(range_match.group(1)),
                          int(range_match.group(2)) + 1))
    if "," in value:
        return [_parse_scalar(v) for v in value.split(",")]
    return _parse_scalar(value)


def _parse_scalar(value: str):
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value


def _write_trace(trace: RunTrace, path: str, fmt: str) -> None:
    if fmt == "json":
        trace.to_json(path)
    else:
        trace.to_csv(path)


def _exit_code(outcome: Outcome) -> int:
    if outcome in SUCCESS_OUTCOMES:
        return 0
    if outcome is Outcome.MAX_ITERATIONS:
        return 2
    return 3


def _separator_config(args) -> SeparatorConfig:
    return SeparatorConfig(max_iterations=args.max_iter,
                           step_tol=args.tol,
                           dilation_beta=args.beta,
                           seed=args.seed)


def cmd_separate(args) -> int:
    spec = parse_instance(args.instance)
    cfg = _separator_config(args)
    obj = inst.from_spec(spec)
    algo = args.algo
    if algo == "shor":
        if spec.family in ("ellipsoid", "failure-r2"):
            A, c, start = obj
            trace = shor_separate_ellipsoid(A, c, start, cfg)
        else:
            trace = shor_separate(obj, obj.points[args.start_index], cfg)
    elif algo == "shor-rand":
        if spec.family in ("ellipsoid", "failure-r2"):
            raise ValueError("shor-rand expects a finite-set instance")
        trace = randomized_shor_separate(obj, cfg)
    elif algo == "bfgs":
        if spec.family in ("ellipsoid", "failure-r2"):
            A, c, start = obj
            trace = shor_separate_ellipsoid(A, c, start, cfg,
                                            dilation="bfgs")
        elif spec.family == "ball":
            g0, _ = obj
            trace = unit_ball_iteration(g0, cfg=cfg)
        else:
            trace = bfgs_separate_hull(obj, args.start_index, cfg=cfg)
    elif algo == "bfgs-chol":
        trace = cholesky_bfgs_separate(obj.points, args.start_index, cfg)
    elif algo == "ellipsoid":
        trace = ellipsoid_separate(obj, cfg)
    elif algo == "segment":
        c, d = obj
        trace = segment_separate(c, d, cfg)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown algorithm {algo!r}")
    _write_trace(trace, args.out, args.format)
    print(f"{trace.algorithm}: {trace.outcome.value} "
          f"after {trace.iterations} iterations")
    return _exit_code(trace.outcome)


def cmd_minimize(args) -> int:
    spec = parse_instance(args.instance)
    obj = inst.from_spec(spec)
    cfg = MinimizerConfig(max_iterations=args.max_iter, step_tol=args.tol,
                          gap_tol=args.gap_tol, seed=args.seed)
    if args.x is not None:
        x0 = np.asarray([float(v) for v in args.x.split(",")])
    else:
        rng = np.random.default_rng([spec.seed, 2])
        x0 = rng.standard_normal(obj.dimension)
    f_star = None
    if args.fstar is not None:
        if args.fstar == "auto":
            if spec.family != "maxquad":
                raise ValueError("--fstar auto requires a maxquad instance")
            f_star, _ = inst.reference_optimum(obj)
        else:
            f_star = float(args.fstar)
    if args.method == "lf-bfgs":
        trace = linesearch_free_bfgs(obj, x0, cfg=cfg, f_star=f_star)
    elif args.method == "fixed-point":
        _, trace = fixed_point_bfgs_descent(obj, x0, cfg=cfg)
    else:
        g0 = obj.subgradient(x0, np.zeros(x0.size))
        trace = fixed_point_bfgs_nonsmooth(obj, x0, g0, cfg=cfg)
    _write_trace(trace, args.out, args.format)
    print(f"{trace.algorithm}: {trace.outcome.value} "
          f"after {trace.iterations} iterations")
    return _exit_code(trace.outcome)


def cmd_experiment(args) -> int:
    result = run_experiment(args.figure, args.out_dir, seed=args.seed,
                            runs=args.runs)
    print(f"{args.figure}: {len(result.rows)} runs")
    for key, value in result.aggregates.items():
        print(f"  {key} = {value}")
    for path in result.csv_paths:
        print(f"  wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shorbfgs",
                     description="Metric-rescaling separation and "
                                 "linesearch-free BFGS minimization")
    sub = parser.add_subparsers(dest="command", required=True)

    sep = sub.add_parser("separate", help="run a separation algorithm")
    sep.add_argument("--algo", required=True,
                     choices=["shor", "shor-rand", "bfgs", "bfgs-chol",
                              "ellipsoid", "segment"])
    sep.add_argument("--instance", required=True,
                     help="family:key=value,... or @file.json")
    sep.add_argument("--seed", type=int, default=0)
    sep.add_argument("--max-iter", type=int, default=10000)
    sep.add_argument("--tol", type=float, default=1e-12)
    sep.add_argument("--beta", type=float, default=2.0,
                     help="dilation constant (> 1)")
    sep.add_argument("--start-index", type=int, default=0)
    sep.add_argument("--out", required=True, help="trace output path")
    sep.add_argument("--format", choices=["csv", "json"], default="csv")
    sep.set_defaults(func=cmd_separate)

    mini = sub.add_parser("minimize", help="run a minimization loop")
    mini.add_argument("--method", required=True,
                      choices=["lf-bfgs", "fixed-point",
                               "fixed-point-nonsmooth"])
    mini.add_argument("--instance", required=True)
    mini.add_argument("--seed", type=int, default=0)
    mini.add_argument("--max-iter", type=int, default=10000)
    mini.add_argument("--tol", type=float, default=1e-12)
    mini.add_argument("--gap-tol", type=float, default=1e-6)
    mini.add_argument("--x", help="comma-separated start point")
    mini.add_argument("--fstar", help="'auto' or a numeric optimum")
    mini.add_argument("--out", required=True)
    mini.add_argument("--format", choices=["csv", "json"], default="csv")
    mini.set_defaults(func=cmd_minimize)

    exp = sub.add_parser("experiment", help="reproduce a figure's data")
    exp.add_argument("--figure", required=True, choices=FIGURES)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--runs", type=int, default=None)
    exp.add_argument("--out-dir",
                     default=os.environ.get("SHORBFGS_OUT_DIR", "out"))
    exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
