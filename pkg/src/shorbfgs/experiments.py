"""Experiment orchestration: one CSV per figure, plus a summary file.

Figure ids:
  fig1  linesearch-free BFGS convergence traces on max-of-quadratics
  fig2  simplex separation sweep over the ill-posedness parameter
  fig3  typical h-trajectories of classic Shor on the simplex instance
  fig4  Shor ellipsoid-separation iteration-count histograms
  fig5  cosine trace of the cycling failure instance
  fig6  BFGS-transform ellipsoid-separation histograms
  fig7  overlaid step-norm decay of the unit-ball BFGS iteration
  fig8  dimension sweep of mean iterations for the unit-ball iteration

Runs inside one experiment derive their RNG stream as
seed_run = base_seed XOR run_index, so results do not depend on
execution order.  Identical (figure, seed, config) inputs produce
byte-identical CSVs.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import instances as inst
from .minimizers import linesearch_free_bfgs
from .oracles import EllipsoidOracle
from .separators import (
    bfgs_separate_hull,
    ellipsoid_separate,
    randomized_shor_separate,
    shor_separate,
    shor_separate_ellipsoid,
    unit_ball_iteration,
)
from .trace import (
    MinimizerConfig,
    Outcome,
    SeparatorConfig,
    SUCCESS_OUTCOMES,
    _fmt,
)

FIGURES = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"]

DEFAULT_RUNS = {"fig1": 20, "fig2": 6, "fig3": 2, "fig4": 100, "fig5": 1,
                "fig6": 100, "fig7": 1000, "fig8": 200}

EPS_GRID = [10.0 ** -1, 10.0 ** -1.5, 10.0 ** -2, 10.0 ** -2.5, 10.0 ** -3]


@dataclass
class ExperimentResult:
    figure: str
    rows: list[dict] = field(default_factory=list)      # per-run summaries
    aggregates: dict = field(default_factory=dict)
    csv_paths: list[str] = field(default_factory=list)


def write_csv(path, columns, rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[c]) for c in columns) + "\n")


def _run_seed(base_seed: int, index: int) -> int:
    return base_seed ^ index


# ---------------------------------------------------------------------------

def _fig1(out_dir, seed, runs):
    result = ExperimentResult("fig1")
    data = []
    for i in range(runs):
        rs = _run_seed(seed, i)
        f = inst.gen_max_quadratics(5, 4, seed=rs)
        f_star, _ = inst.reference_optimum(f)
        rng = np.random.default_rng([rs, 2])
        x0 = rng.standard_normal(5)
        cfg = MinimizerConfig(max_iterations=2000, gap_tol=1e-6)
        trace = linesearch_free_bfgs(f, x0, cfg=cfg, f_star=f_star)
        for row in trace.rows:
            data.append({"seed": rs, "k": row["k"], "f": row["f"],
                         "gap": row["gap"], "accepted": row["accepted"]})
        gaps = trace.column("gap")
        result.rows.append({
            "instance": f"maxquad-{rs}", "algorithm": trace.algorithm,
            "outcome": trace.outcome.value, "iterations": trace.iterations,
            "final": float(gaps[-1])})
    path = os.path.join(out_dir, "fig1.csv")
    write_csv(path, ["seed", "k", "f", "gap", "accepted"], data)
    result.csv_paths.append(path)
    succ = sum(r["outcome"] == "converged" for r in result.rows)
    result.aggregates["converged"] = succ
    return result


def _fig2(out_dir, seed, runs):
    result = ExperimentResult("fig2")
    data = []
    for eps in EPS_GRID:
        oracle = inst.gen_simplex(eps)
        m = len(oracle)
        for algo in ["shor", "shor-randomized", "bfgs", "ellipsoid"]:
            counts = []
            n_runs = m if algo in ("shor", "bfgs") else runs
            n_runs = 1 if algo == "ellipsoid" else n_runs
            for i in range(n_runs):
                cfg = SeparatorConfig(max_iterations=10000,
                                      seed=_run_seed(seed, i))
                if algo == "shor":
                    trace = shor_separate(oracle, oracle.points[i], cfg)
                elif algo == "shor-randomized":
                    trace = randomized_shor_separate(oracle, cfg)
                elif algo == "bfgs":
                    cfg.track_spectrum = False
                    trace = bfgs_separate_hull(oracle, i, cfg=cfg)
                else:
                    cfg.track_spectrum = False
                    trace = ellipsoid_separate(oracle, cfg)
                data.append({"eps": eps, "algorithm": algo, "run": i,
                             "iterations": trace.iterations,
                             "outcome": trace.outcome.value})
                if trace.outcome in SUCCESS_OUTCOMES:
                    counts.append(trace.iterations)
                result.rows.append({
                    "instance": f"simplex-eps{eps:g}", "algorithm": algo,
                    "outcome": trace.outcome.value,
                    "iterations": trace.iterations, "final": float("nan")})
            result.aggregates[f"mean[{algo},eps={eps:g}]"] = (
                float(np.mean(counts)) if counts else float("nan"))
    path = os.path.join(out_dir, "fig2.csv")
    write_csv(path, ["eps", "algorithm", "run", "iterations", "outcome"],
              data)
    result.csv_paths.append(path)
    return result


def _fig3(out_dir, seed, runs):
    result = ExperimentResult("fig3")
    data = []
    for eps in [1e-1, 1e-3]:
        oracle = inst.gen_simplex(eps)
        cfg = SeparatorConfig(max_iterations=10000)
        trace = shor_separate(oracle, oracle.points[0], cfg)
        for row in trace.rows:
            data.append({"eps": eps, "k": row["k"], "h1": row["h1"],
                         "h2": row["h2"]})
        result.rows.append({"instance": f"simplex-eps{eps:g}",
                            "algorithm": "shor",
                            "outcome": trace.outcome.value,
                            "iterations": trace.iterations,
                            "final": float("nan")})
    path = os.path.join(out_dir, "fig3.csv")
    write_csv(path, ["eps", "k", "h1", "h2"], data)
    result.csv_paths.append(path)
    return result


def _ellipsoid_histogram(out_dir, seed, runs, figure, bfgs_transform):
    result = ExperimentResult(figure)
    data = []
    for d in [1.0, 0.1]:
        counts = []
        for i in range(runs):
            rs = _run_seed(seed, i)
            A, c, _ = inst.gen_ellipsoid(range(5), d, seed=rs)
            start = inst.random_unit(np.random.default_rng([rs, 1]), 5)
            cfg = SeparatorConfig(max_iterations=10000)
            trace = shor_separate_ellipsoid(
                A, c, start, cfg,
                dilation="bfgs" if bfgs_transform else None)
            data.append({"d": d, "instance": i,
                         "iterations": trace.iterations,
                         "outcome": trace.outcome.value})
            if trace.outcome is Outcome.SEPARATED:
                counts.append(trace.iterations)
            result.rows.append({"instance": f"ellipsoid-d{d:g}-{rs}",
                                "algorithm": trace.algorithm,
                                "outcome": trace.outcome.value,
                                "iterations": trace.iterations,
                                "final": float("nan")})
        result.aggregates[f"mean[d={d:g}]"] = (
            float(np.mean(counts)) if counts else float("nan"))
        result.aggregates[f"separated[d={d:g}]"] = len(counts)
    path = os.path.join(out_dir, f"{figure}.csv")
    write_csv(path, ["d", "instance", "iterations", "outcome"], data)
    result.csv_paths.append(path)
    return result


def _fig4(out_dir, seed, runs):
    return _ellipsoid_histogram(out_dir, seed, runs, "fig4",
                                bfgs_transform=False)


def _fig6(out_dir, seed, runs):
    return _ellipsoid_histogram(out_dir, seed, runs, "fig6",
                                bfgs_transform=True)


def _fig5(out_dir, seed, runs):
    result = ExperimentResult("fig5")
    A, c, start = inst.failure_instance()
    cfg = SeparatorConfig(max_iterations=1000)
    trace = shor_separate_ellipsoid(A, c, start, cfg)
    data = [{"k": row["k"], "cos_ph": row["cos_ph"]} for row in trace.rows]
    path = os.path.join(out_dir, "fig5.csv")
    write_csv(path, ["k", "cos_ph"], data)
    result.csv_paths.append(path)
    result.rows.append({"instance": "failure-r2", "algorithm": "shor",
                        "outcome": trace.outcome.value,
                        "iterations": trace.iterations,
                        "final": float(trace.rows[-1]["cos_ph"])})
    lag, score = inst.detect_cycle(trace.column("cos_ph"), burn_in=20)
    result.aggregates["cycle_lag"] = lag
    result.aggregates["cycle_autocorrelation"] = score
    return result


def _unit_ball_run(n, rs, max_iterations=2000):
    rng = np.random.default_rng(rs)
    g0 = inst.random_unit(rng, n)
    H0 = inst.random_spd(rng, n)
    cfg = SeparatorConfig(max_iterations=max_iterations,
                          step_tol_rel=1e-8, track_spectrum=False)
    return unit_ball_iteration(g0, H0, cfg)


def _fig7(out_dir, seed, runs):
    result = ExperimentResult("fig7")
    data = []
    reached = 0
    for i in range(runs):
        rs = _run_seed(seed, i)
        trace = _unit_ball_run(5, rs, max_iterations=500)
        for row in trace.rows:
            data.append({"run": i, "k": row["k"], "s_norm": row["s_norm"]})
        if trace.outcome is Outcome.STEP_VANISHED:
            reached += 1
        result.rows.append({"instance": f"ball-5-{rs}",
                            "algorithm": "unit-ball",
                            "outcome": trace.outcome.value,
                            "iterations": trace.iterations,
                            "final": float(trace.rows[-1]["s_norm"])})
    path = os.path.join(out_dir, "fig7.csv")
    write_csv(path, ["run", "k", "s_norm"], data)
    result.csv_paths.append(path)
    result.aggregates["reached_tolerance"] = reached
    return result


def _fig8(out_dir, seed, runs):
    result = ExperimentResult("fig8")
    data = []
    means = []
    dims = [2, 4, 8, 16, 32, 64]
    for n in dims:
        counts = []
        for i in range(runs):
            rs = _run_seed(seed, i + 10000 * n)
            trace = _unit_ball_run(n, rs, max_iterations=5000)
            data.append({"n": n, "run": i, "iterations": trace.iterations,
                         "outcome": trace.outcome.value})
            if trace.outcome is Outcome.STEP_VANISHED:
                counts.append(trace.iterations)
            result.rows.append({"instance": f"ball-{n}-{rs}",
                                "algorithm": "unit-ball",
                                "outcome": trace.outcome.value,
                                "iterations": trace.iterations,
                                "final": float("nan")})
        mean = float(np.mean(counts)) if counts else float("nan")
        means.append(mean)
        result.aggregates[f"mean[n={n}]"] = mean
    result.aggregates["loglog_slope"] = inst.loglog_slope(dims, means)
    path = os.path.join(out_dir, "fig8.csv")
    write_csv(path, ["n", "run", "iterations", "outcome"], data)
    result.csv_paths.append(path)
    return result


_DISPATCH = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4,
             "fig5": _fig5, "fig6": _fig6, "fig7": _fig7, "fig8": _fig8}


def run_experiment(figure: str, out_dir: str, seed: int = 0,
                   runs: int | None = None) -> ExperimentResult:
    """Run the named figure's experiment, writing its CSV and appending
    a per-run summary to <out_dir>/summary.csv."""
    if figure not in _DISPATCH:
        raise ValueError(f"unknown figure id: {figure!r}")
    os.makedirs(out_dir, exist_ok=True)
    result = _DISPATCH[figure](out_dir, seed,
                               runs if runs is not None
                               else DEFAULT_RUNS[figure])
    summary_path = os.path.join(out_dir, f"{figure}_summary.csv")
    write_csv(summary_path,
              ["instance", "algorithm", "outcome", "iterations", "final"],
              result.rows)
    result.csv_paths.append(summary_path)
    return result
