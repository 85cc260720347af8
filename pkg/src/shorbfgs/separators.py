"""Separation and membership algorithms as runnable state machines.

Each function runs one algorithm to termination and returns a RunTrace
with one row per iteration and a terminal Outcome.  No I/O happens here.

Certificate convention: a SEPARATED outcome always carries a normal z
with z'q < 0 for every point q of the (origin-translated) set.  For the
Shor-style loops, whose natural output vector satisfies the opposite
inequality, the returned normal is the negation; the unnegated vector is
kept in ``extras["raw_normal"]``.
"""
from __future__ import annotations

import time

import numpy as np

from .errors import CurvatureViolation, DegenerateCurvature, RescalingError
from .oracles import FiniteSetOracle, SupportOracle, transformed_argmin
from .trace import Outcome, RunTrace, SeparatorConfig
from .updates import bfgs_update, ellipsoid_update, shor_dilation, symmetrize


def _spectrum(H: np.ndarray) -> tuple[float, float, float]:
    """(logdet, lmax, lmin) of a positive-definite matrix."""
    eigs = np.linalg.eigvalsh(symmetrize(H))
    return float(np.sum(np.log(eigs))), float(eigs[-1]), float(eigs[0])


def _finish(trace: RunTrace, outcome: Outcome, t0: float,
            normal: np.ndarray | None = None) -> RunTrace:
    trace.outcome = outcome
    trace.normal = normal
    trace.wall_time = time.perf_counter() - t0
    return trace


def shor_separate(oracle: SupportOracle, start: np.ndarray,
                  cfg: SeparatorConfig | None = None) -> RunTrace:
    """Classic Shor updating to decide whether 0 lies in conv(set).

    Keeps the set immutable: all rescalings accumulate in V and the
    oracle is queried through `transformed_argmin`.
    """
    cfg = cfg or SeparatorConfig()
    t0 = time.perf_counter()
    h = np.asarray(start, dtype=float).copy()
    V = np.eye(h.size)
    trace = RunTrace("shor")
    for k in range(cfg.max_iterations):
        hnorm = float(np.linalg.norm(h))
        if hnorm <= cfg.step_tol:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        p, pth = transformed_argmin(oracle, V, h)
        cos = pth / (np.linalg.norm(p) * hnorm)
        trace.rows.append({"k": k, "h_norm": hnorm, "p_dot_h": pth,
                           "cos_ph": cos, "h1": float(h[0]),
                           "h2": float(h[1]) if h.size > 1 else 0.0})
        if pth > 0.0:
            raw = V.T @ h
            trace.extras["raw_normal"] = raw
            return _finish(trace, Outcome.SEPARATED, t0, normal=-raw)
        e = h - p
        if np.linalg.norm(e) <= cfg.step_tol:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        W = shor_dilation(e, cfg.dilation_beta).matrix
        h = W @ p
        V = W @ V
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)


def shor_separate_ellipsoid(A: np.ndarray, c: np.ndarray,
                            start_unit: np.ndarray,
                            cfg: SeparatorConfig | None = None,
                            dilation=None) -> RunTrace:
    """Shor updating to separate the point c from the ellipsoid A B.

    Mutates working copies of A and c exactly as the update rule is
    stated; no matrix inversion is involved.  On SEPARATED, the normal z
    satisfies |A0'z| < c0'z for the original data.

    The iteration is positively homogeneous in (A, c): scaling both by a
    positive constant leaves y, W and every sign test unchanged.  On
    cycling instances the rank-one transforms contract the data
    geometrically, so to keep long runs representable in floating point
    the working (A, c) pair is renormalized by |c| each iteration; the
    accumulated log-scale restores true magnitudes in the trace.

    ``dilation`` chooses the rank-one transform from (e, h, p); the
    default is the symmetric Shor dilation.  Passing
    ``dilation="bfgs"`` uses the non-symmetric BFGS-style transform.
    """
    from .updates import bfgs_w_matrix

    cfg = cfg or SeparatorConfig()
    t0 = time.perf_counter()
    A = np.asarray(A, dtype=float).copy()
    c = np.asarray(c, dtype=float).copy()
    x = np.asarray(start_unit, dtype=float).copy()
    V = np.eye(A.shape[0])
    log_scale = 0.0  # log of the factor divided out of (A, c) so far
    trace = RunTrace("shor-ellipsoid" if dilation is None
                     else "bfgs-ellipsoid")
    for k in range(cfg.max_iterations):
        h = A @ x - c
        hnorm = float(np.linalg.norm(h))
        true_hnorm = float(np.exp(log_scale + np.log(hnorm))) \
            if hnorm > 0.0 else 0.0
        # degeneracy is judged at the working scale, where |c| = 1 after
        # renormalization; the true magnitude may shrink without limit
        # on cycling runs without impeding the iteration
        if hnorm <= cfg.step_tol:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        w = -A.T @ h
        wnorm = float(np.linalg.norm(w))
        if wnorm == 0.0:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        y = w / wnorm
        p = A @ y - c
        pth = float(p @ h)
        cos = pth / (np.linalg.norm(p) * hnorm)
        trace.rows.append({"k": k, "h_norm": true_hnorm,
                           "p_dot_h": float(np.sign(pth)
                                            * np.exp(2.0 * log_scale)
                                            * abs(pth)),
                           "cos_ph": cos})
        if pth > 0.0:
            raw = V.T @ h
            trace.extras["raw_normal"] = raw
            return _finish(trace, Outcome.SEPARATED, t0, normal=-raw)
        e = h - p
        if float(np.linalg.norm(e)) == 0.0:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        if dilation == "bfgs":
            try:
                W = bfgs_w_matrix(h, p).matrix
            except RescalingError:
                return _finish(trace, Outcome.CURVATURE_FAILURE, t0)
        else:
            W = shor_dilation(e, cfg.dilation_beta).matrix
        A = W @ A
        V = W @ V
        c = W @ c
        x = y
        cnorm = float(np.linalg.norm(c))
        if cnorm > 0.0:
            A /= cnorm
            c /= cnorm
            log_scale += np.log(cnorm)
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)


def randomized_shor_separate(oracle: SupportOracle,
                             cfg: SeparatorConfig | None = None) -> RunTrace:
    """Shor updating with a fresh random restart direction each iteration.

    The direction u is drawn componentwise standard normal; h is the
    minimizer of <., u> over the current (rescaled) set.
    """
    cfg = cfg or SeparatorConfig()
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    n = oracle.dimension
    V = np.eye(n)
    trace = RunTrace("shor-randomized")
    for k in range(cfg.max_iterations):
        u = rng.standard_normal(n)
        h, _ = transformed_argmin(oracle, V, u)
        hnorm = float(np.linalg.norm(h))
        if hnorm <= cfg.step_tol:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        p, pth = transformed_argmin(oracle, V, h)
        cos = pth / (np.linalg.norm(p) * hnorm)
        trace.rows.append({"k": k, "h_norm": hnorm, "p_dot_h": pth,
                           "cos_ph": cos})
        if pth > 0.0:
            # p minimizes <., h> over the transformed set, so h is the
            # separating functional there; pulled back it is V'h
            raw = V.T @ h
            trace.extras["raw_normal"] = raw
            return _finish(trace, Outcome.SEPARATED, t0, normal=-raw)
        e = h - p
        if np.linalg.norm(e) <= cfg.step_tol:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        W = shor_dilation(e, cfg.dilation_beta).matrix
        V = W @ V
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)


def _bfgs_separate_loop(oracle: SupportOracle, g0: np.ndarray,
                        H0: np.ndarray | None, cfg: SeparatorConfig,
                        membership_branch: bool, name: str) -> RunTrace:
    t0 = time.perf_counter()
    g = np.asarray(g0, dtype=float).copy()
    n = g.size
    H = np.eye(n) if H0 is None else np.asarray(H0, dtype=float).copy()
    trace = RunTrace(name)
    s0_norm = None
    for k in range(cfg.max_iterations):
        if membership_branch and np.linalg.norm(g) <= cfg.step_tol:
            return _finish(trace, Outcome.MEMBERSHIP_CERTIFIED, t0,
                           normal=None)
        s = -H @ g
        snorm = float(np.linalg.norm(s))
        if s0_norm is None:
            s0_norm = snorm
        tol = max(cfg.step_tol, cfg.step_tol_rel * s0_norm)
        if snorm <= tol:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        g_plus, stat = oracle.argmax_linear(s)
        row = {"k": k, "s_norm": snorm, "gplus_dot_s": stat,
               "s_dot_g": float(s @ g), "s_dot_y": stat - float(s @ g)}
        if cfg.track_spectrum:
            row["logdet_h"], row["lmax_h"], row["lmin_h"] = _spectrum(H)
        trace.rows.append(row)
        if stat < 0.0:
            return _finish(trace, Outcome.SEPARATED, t0, normal=s)
        try:
            H = bfgs_update(H, g, g_plus, cfg.curvature_floor)
        except CurvatureViolation:
            return _finish(trace, Outcome.CURVATURE_FAILURE, t0)
        g = g_plus
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)


def bfgs_separate(oracle: SupportOracle, start: np.ndarray,
                  H0: np.ndarray | None = None,
                  cfg: SeparatorConfig | None = None) -> RunTrace:
    """Unit-step BFGS iteration deciding whether 0 lies in a compact
    convex set, given its support oracle and a starting point of the set.
    """
    return _bfgs_separate_loop(oracle, start, H0, cfg or SeparatorConfig(),
                               membership_branch=True, name="bfgs")


def bfgs_separate_hull(points: FiniteSetOracle, start_index: int = 0,
                       H0: np.ndarray | None = None,
                       cfg: SeparatorConfig | None = None) -> RunTrace:
    """BFGS separation of 0 from the convex hull of a finite point set
    not containing 0 (no membership branch)."""
    g0 = points.points[start_index]
    return _bfgs_separate_loop(points, g0, H0, cfg or SeparatorConfig(),
                               membership_branch=False, name="bfgs-hull")


def unit_ball_iteration(g0: np.ndarray, H0: np.ndarray | None = None,
                        cfg: SeparatorConfig | None = None) -> RunTrace:
    """BFGS iteration on the unit ball: g_+ = s/|s| at every step.

    The trial step is expected to shrink to zero; the run ends
    STEP_VANISHED once |s| falls below the (absolute or relative)
    tolerance.
    """
    cfg = cfg or SeparatorConfig()
    t0 = time.perf_counter()
    g = np.asarray(g0, dtype=float).copy()
    n = g.size
    H = np.eye(n) if H0 is None else np.asarray(H0, dtype=float).copy()
    trace = RunTrace("unit-ball")
    s0_norm = None
    for k in range(cfg.max_iterations):
        s = -H @ g
        snorm = float(np.linalg.norm(s))
        if s0_norm is None:
            s0_norm = snorm
        tol = max(cfg.step_tol, cfg.step_tol_rel * s0_norm)
        row = {"k": k, "s_norm": snorm, "s_dot_g": float(s @ g)}
        if cfg.track_spectrum:
            row["logdet_h"], row["lmax_h"], row["lmin_h"] = _spectrum(H)
        trace.rows.append(row)
        if snorm <= tol:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        g_plus = s / snorm
        try:
            H = bfgs_update(H, g, g_plus, cfg.curvature_floor)
        except CurvatureViolation:
            return _finish(trace, Outcome.CURVATURE_FAILURE, t0)
        g = g_plus
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)


def ellipsoid_separate(points: FiniteSetOracle,
                       cfg: SeparatorConfig | None = None) -> RunTrace:
    """Ellipsoid algorithm for separating 0 from conv(D), D finite
    without 0, including the |x| > 1 branch with g = x."""
    cfg = cfg or SeparatorConfig()
    t0 = time.perf_counter()
    n = points.dimension
    x = np.zeros(n)
    H = np.eye(n)
    trace = RunTrace("ellipsoid")
    for k in range(cfg.max_iterations):
        xnorm = float(np.linalg.norm(x))
        if xnorm > 1.0:
            g = x.copy()
            gtx = xnorm ** 2
        else:
            g, _ = points.argmax_linear(x)
            gtx = float(g @ x)
        row = {"k": k, "x_norm": xnorm, "g_dot_x": gtx}
        if cfg.track_spectrum:
            row["logdet_h"], row["lmax_h"], row["lmin_h"] = _spectrum(H)
        trace.rows.append(row)
        if xnorm <= 1.0 and gtx < 0.0:
            return _finish(trace, Outcome.SEPARATED, t0, normal=x.copy())
        step, H = ellipsoid_update(H, g)
        x = x + step
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)


def cholesky_bfgs_separate(points, start_index: int = 0,
                           cfg: SeparatorConfig | None = None) -> RunTrace:
    """Cholesky-factored BFGS separation of 0 from conv{a_i}.

    Implemented exactly as stated: the point list is mutated in place by
    the rank-one transform each iteration.  The accumulated transform is
    tracked separately so a certificate in the original coordinates can
    be reported.
    """
    cfg = cfg or SeparatorConfig()
    t0 = time.perf_counter()
    a = np.atleast_2d(np.asarray(points, dtype=float)).copy()
    n = a.shape[1]
    M = np.eye(n)  # product of the W transforms applied so far
    i = int(start_index)
    trace = RunTrace("cholesky-bfgs")
    for k in range(cfg.max_iterations):
        h = a[i]
        hnorm = float(np.linalg.norm(h))
        if hnorm <= cfg.step_tol:
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        vals = a @ h
        j = int(np.argmin(vals))
        stat = float(vals[j])
        trace.rows.append({"k": k, "h_norm": hnorm, "ai_dot_aj": stat})
        if stat > 0.0:
            raw = M.T @ h
            trace.extras["raw_normal"] = raw
            return _finish(trace, Outcome.SEPARATED, t0, normal=-raw)
        e = h - a[j]
        beta = float(h @ e)
        if beta <= cfg.curvature_floor * hnorm ** 2:
            return _finish(trace, Outcome.CURVATURE_FAILURE, t0)
        w = e / beta - h / (hnorm * np.sqrt(beta))
        h_old = h.copy()
        a -= np.outer(vals, w)          # a_r -= (h'a_r) w for every r
        M -= np.outer(w, h_old @ M)     # M = (I - w h') M
        i = j
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)


def segment_separate(c: np.ndarray, d: np.ndarray,
                     cfg: SeparatorConfig | None = None) -> RunTrace:
    """Cholesky-factored BFGS specialized to a two-point segment [c, d].

    Each iteration applies the rank-one transform to both endpoints and
    swaps their roles.  The trace records the conditioning measure
    gamma = sqrt(|c|^2 |d|^2 - (c'd)^2) / |c - d|^2 per iteration.
    """
    cfg = cfg or SeparatorConfig()
    t0 = time.perf_counter()
    c = np.asarray(c, dtype=float).copy()
    d = np.asarray(d, dtype=float).copy()
    n = c.size
    M = np.eye(n)
    trace = RunTrace("segment")
    for k in range(cfg.max_iterations):
        cnorm = float(np.linalg.norm(c))
        dnorm = float(np.linalg.norm(d))
        diff = c - d
        diffnorm2 = float(diff @ diff)
        if (cnorm <= cfg.step_tol or dnorm <= cfg.step_tol
                or diffnorm2 <= cfg.step_tol ** 2):
            return _finish(trace, Outcome.STEP_VANISHED, t0)
        ctd = float(c @ d)
        gamma = np.sqrt(max(cnorm ** 2 * dnorm ** 2 - ctd ** 2, 0.0)) / diffnorm2
        trace.rows.append({"k": k, "c_dot_d": ctd, "gamma": gamma,
                           "c_norm": cnorm, "d_norm": dnorm})
        if ctd > 0.0:
            raw = M.T @ c
            trace.extras["raw_normal"] = raw
            return _finish(trace, Outcome.SEPARATED, t0, normal=-raw)
        beta = float(c @ diff)
        if beta <= cfg.curvature_floor * cnorm ** 2:
            return _finish(trace, Outcome.CURVATURE_FAILURE, t0)
        w = diff / beta - c / (cnorm * np.sqrt(beta))
        d_new = d - ctd * w
        c_new = c - cnorm ** 2 * w
        M -= np.outer(w, c @ M)
        c, d = d_new, c_new
    return _finish(trace, Outcome.MAX_ITERATIONS, t0)
