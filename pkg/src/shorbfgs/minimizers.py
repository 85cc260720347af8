"""Minimization loops built on the unit-step BFGS update.

Three procedures: the linesearch-free BFGS method (unit step, H always
updated, x moved only on strict descent), repeated BFGS updating at a
fixed point for smooth objectives, and the nonsmooth fixed-point loop in
which the pair (g, H) is updated together.
"""
from __future__ import annotations

import time

import numpy as np

from .errors import CurvatureViolation
from .trace import MinimizerConfig, Outcome, RunTrace
from .updates import bfgs_update


def _finish(trace: RunTrace, outcome: Outcome, t0: float) -> RunTrace:
    trace.outcome = outcome
    trace.wall_time = time.perf_counter() - t0
    return trace


def linesearch_free_bfgs(f, x0: np.ndarray, H0: np.ndarray | None = None,
                         cfg: MinimizerConfig | None = None,
                         f_star: float | None = None) -> RunTrace:
    """Unit-step BFGS with no line search.

    Every iteration updates H from the trial point's directional-argmax
    subgradient; the iterate moves only when the trial point strictly
    decreases f.  On a rejected step the subgradient at the unmoved
    iterate is refreshed along the trial direction.

    ``f_star``, when given, is an externally supplied optimum used only
    for the gap column and the gap-based stopping test; the minimizer
    never computes it.
    """
    cfg = cfg or MinimizerConfig()
    t0 = time.perf_counter()
    x = np.asarray(x0, dtype=float).copy()
    n = x.size
    H = np.eye(n) if H0 is None else np.asarray(H0, dtype=float).copy()
    g = f.subgradient(x, np.zeros(n))
    fx = f.value(x)
    trace = RunTrace("linesearch-free-bfgs")
    iterates = [x.copy()] if cfg.store_iterates else None
    for k in range(cfg.max_iterations):
        s = -H @ g
        snorm = float(np.linalg.norm(s))
        gap = float("nan") if f_star is None else fx - f_star
        if snorm <= cfg.step_tol:
            trace.rows.append({"k": k, "f": fx, "gap": gap,
                               "s_norm": snorm, "accepted": False})
            break
        x_trial = x + s
        f_trial = f.value(x_trial)
        accepted = f_trial < fx
        trace.rows.append({"k": k, "f": fx, "gap": gap,
                           "s_norm": snorm, "accepted": accepted})
        g_plus = f.subgradient(x_trial, s)
        try:
            H = bfgs_update(H, g, g_plus, cfg.curvature_floor)
        except CurvatureViolation:
            return _finish(trace, Outcome.CURVATURE_FAILURE, t0)
        if accepted:
            x = x_trial
            fx = f_trial
            g = g_plus
        else:
            g = f.subgradient(x, s)
        if iterates is not None:
            iterates.append(x.copy())
        if f_star is not None and fx - f_star <= cfg.gap_tol:
            trace.extras.update(x=x, f=fx)
            if iterates is not None:
                trace.extras["iterates"] = iterates
            return _finish(trace, Outcome.CONVERGED, t0)
    trace.extras.update(x=x, f=fx)
    if iterates is not None:
        trace.extras["iterates"] = iterates
    if trace.rows and trace.rows[-1]["s_norm"] <= cfg.step_tol:
        return _finish(trace, Outcome.STEP_VANISHED, t0)
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)


def fixed_point_bfgs_descent(f, x: np.ndarray,
                             H0: np.ndarray | None = None,
                             cfg: MinimizerConfig | None = None,
                             ) -> tuple[np.ndarray, RunTrace]:
    """Repeat the unit-step BFGS update at the fixed point x of a smooth
    objective until the trial step gives descent.

    Returns the metric H certifying a descent direction, with the trace.
    """
    cfg = cfg or MinimizerConfig()
    t0 = time.perf_counter()
    x = np.asarray(x, dtype=float)
    n = x.size
    H = np.eye(n) if H0 is None else np.asarray(H0, dtype=float).copy()
    g = f.subgradient(x, np.zeros(n))
    fx = f.value(x)
    trace = RunTrace("fixed-point-bfgs")
    for k in range(cfg.max_iterations):
        s = -H @ g
        x_trial = x + s
        f_trial = f.value(x_trial)
        trace.rows.append({"k": k, "s_norm": float(np.linalg.norm(s)),
                           "f_trial": f_trial})
        if f_trial < fx:
            trace.extras.update(s=s)
            return H, _finish(trace, Outcome.DESCENT, t0)
        g_plus = f.subgradient(x_trial, s)
        try:
            H = bfgs_update(H, g, g_plus, cfg.curvature_floor)
        except CurvatureViolation:
            return H, _finish(trace, Outcome.CURVATURE_FAILURE, t0)
    return H, _finish(trace, Outcome.MAX_ITERATIONS, t0)


def fixed_point_bfgs_nonsmooth(f, x: np.ndarray, g0: np.ndarray,
                               H0: np.ndarray | None = None,
                               cfg: MinimizerConfig | None = None) -> RunTrace:
    """Nonsmooth fixed-point loop: update the pair (g, H) at a fixed x
    until the trial step gives descent, the step vanishes, or the update
    becomes undefined.

    g is refreshed each iteration by the directional argmax over the
    subdifferential at x along the last trial step.
    """
    cfg = cfg or MinimizerConfig()
    t0 = time.perf_counter()
    x = np.asarray(x, dtype=float)
    g = np.asarray(g0, dtype=float).copy()
    n = x.size
    H = np.eye(n) if H0 is None else np.asarray(H0, dtype=float).copy()
    fx = f.value(x)
    trace = RunTrace("fixed-point-bfgs-nonsmooth")
    for k in range(cfg.max_iterations):
        s = -H @ g
        snorm = float(np.linalg.norm(s))
        if snorm <= cfg.step_tol:
            trace.rows.append({"k": k, "s_norm": snorm,
                               "f_trial": float("nan")})
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        x_trial = x + s
        f_trial = f.value(x_trial)
        trace.rows.append({"k": k, "s_norm": snorm, "f_trial": f_trial})
        if f_trial < fx:
            trace.extras.update(s=s)
            return _finish(trace, Outcome.DESCENT, t0)
        g_plus = f.subgradient(x_trial, s)
        try:
            H = bfgs_update(H, g, g_plus, cfg.curvature_floor)
        except CurvatureViolation:
            return _finish(trace, Outcome.CURVATURE_FAILURE, t0)
        g = f.subgradient(x, s)
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)
