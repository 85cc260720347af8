"""Instance generators, the external optimum oracle, and trace analytics.

Families:
  - the irregular-simplex separation instance in R^5 with ill-posedness
    parameter eps;
  - random ellipsoid separation instances with a diagonal matrix of
    powers of ten and offset parameter d;
  - the fixed 2-d instance on which classic Shor updating cycles forever;
  - random max-of-quadratics objectives;
  - strictly convex quadratics with a prescribed condition number;
  - segments, balls, and explicit finite point sets.

Instances are described by a JSON-serializable spec
{"family": ..., "params": {...}, "seed": ...} and materialized with
`from_spec`.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from .errors import OracleDisagreement
from .objectives import QuadraticObjective
from .oracles import FiniteSetOracle, MaxQuadSubdiff


# ---------------------------------------------------------------------------
# instance specs

@dataclass
class InstanceSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params,
                "seed": self.seed}

    @classmethod
    def from_dict(cls, payload: dict) -> "InstanceSpec":
        return cls(family=payload["family"],
                   params=dict(payload.get("params", {})),
                   seed=int(payload.get("seed", 0)))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "InstanceSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform on the unit sphere: normalized componentwise normal."""
    u = rng.standard_normal(n)
    return u / np.linalg.norm(u)


# ---------------------------------------------------------------------------
# generators

def gen_simplex(eps: float) -> FiniteSetOracle:
    """Six points in R^5: a_j - (1+eps) p for a_j = 4^j e_j, plus -p,
    where p is the stated convex combination of the a_j.

    For small eps the origin sits just outside one facet of the simplex.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = 5
    j = np.arange(1, n + 1)
    a = np.diag(4.0 ** j)                       # row j-1 is a_j = 4^j e_j
    p = np.ones(n) / np.sum(4.0 ** (-j))
    points = np.vstack([a - (1.0 + eps) * p, -p])
    return FiniteSetOracle(points, description=f"simplex eps={eps:g}")


def simplex_weights() -> np.ndarray:
    """Convex weights w with sum w_j a_j = p for the simplex family."""
    j = np.arange(1, 6)
    w = 4.0 ** (-j)
    return w / w.sum()


def gen_ellipsoid(exponents, d: float, seed: int = 0,
                  ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonal A = diag(10^exponents), c = (1+d) A u for a random unit
    u.  Returns (A, c, u)."""
    if d <= 0:
        raise ValueError("d must be positive")
    exponents = np.asarray(exponents, dtype=float)
    A = np.diag(10.0 ** exponents)
    rng = np.random.default_rng(seed)
    u = random_unit(rng, exponents.size)
    c = (1.0 + d) * (A @ u)
    return A, c, u


def failure_instance() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The fixed 2-d ellipsoid instance on which classic Shor updating
    cycles with period five instead of terminating.

    Returns (A, c, start).  The cycling behavior occurs for every unit
    start direction with angle in roughly [2.95, 4.18] radians; the
    returned start (-1, 0) sits well inside that basin.  (The direction
    v/|v| that defines c lies just outside the basin and leads to quick
    separation instead.)
    """
    A = np.array([[1.0, 0.0], [0.0, 10.0]])
    v = -np.array([10.0, 39.0])
    u = v / np.linalg.norm(v)
    c = (1.0 + 1e-2) * (A @ u)
    return A, c, np.array([-1.0, 0.0])


def gen_max_quadratics(n: int, m: int, seed: int = 0) -> MaxQuadSubdiff:
    """m random strictly convex quadratic pieces in R^n:
    P_i = G_i'G_i + I with G_i standard normal, b_i and c_i standard
    normal."""
    rng = np.random.default_rng(seed)
    pieces = []
    for _ in range(m):
        G = rng.standard_normal((n, n))
        P = G.T @ G + np.eye(n)
        b = rng.standard_normal(n)
        c = float(rng.standard_normal())
        pieces.append((P, b, c))
    return MaxQuadSubdiff(pieces)


def gen_quadratic(n: int, seed: int = 0,
                  cond: float | None = None) -> QuadraticObjective:
    """f(x) = |Rx|^2/2 with R a random invertible matrix.

    With ``cond`` given, R has singular values log-spaced so that
    cond(R'R) equals ``cond``; otherwise R is standard normal.
    """
    rng = np.random.default_rng(seed)
    if cond is None:
        R = rng.standard_normal((n, n))
        return QuadraticObjective(R)
    svals = np.sqrt(np.logspace(0.0, np.log10(cond), n))[::-1]
    U, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return QuadraticObjective(U @ np.diag(svals) @ V.T)


def random_spd(rng: np.random.Generator, n: int,
               spread: float = 1.0) -> np.ndarray:
    """Random symmetric positive-definite matrix with eigenvalues
    exp(spread * normal) in a random orthonormal frame."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eigs = np.exp(spread * rng.standard_normal(n))
    return (Q * eigs) @ Q.T


def from_spec(spec: InstanceSpec):
    """Materialize an instance spec into its runnable object(s).

    Returns, by family:
      simplex, finite-set -> FiniteSetOracle
      ellipsoid, failure-r2 -> (A, c, start_unit)
      maxquad -> MaxQuadSubdiff
      quad -> QuadraticObjective
      segment -> (c, d)
      ball -> (g0, n)
    """
    fam, p, seed = spec.family, spec.params, spec.seed
    if fam == "simplex":
        return gen_simplex(float(p["eps"]))
    if fam == "finite-set":
        return FiniteSetOracle(np.asarray(p["points"], dtype=float))
    if fam == "ellipsoid":
        exponents = p.get("exponents", list(range(5)))
        A, c, _ = gen_ellipsoid(exponents, float(p.get("d", 1.0)), seed)
        start = random_unit(np.random.default_rng([seed, 1]), A.shape[0])
        return A, c, start
    if fam == "failure-r2":
        return failure_instance()
    if fam == "maxquad":
        return gen_max_quadratics(int(p.get("n", 5)), int(p.get("m", 4)),
                                  seed)
    if fam == "quad":
        return gen_quadratic(int(p.get("n", 5)), seed,
                             cond=(float(p["cond"]) if "cond" in p else None))
    if fam == "segment":
        return (np.asarray(p["c"], dtype=float),
                np.asarray(p["d"], dtype=float))
    if fam == "ball":
        n = int(p.get("n", 5))
        g0 = random_unit(np.random.default_rng(seed), n)
        return g0, n
    raise ValueError(f"unknown instance family: {fam!r}")


# ---------------------------------------------------------------------------
# reference optimum for max-of-quadratics objectives

def min_norm_in_hull(points) -> tuple[np.ndarray, float]:
    """Exact minimum-norm point of the convex hull of a small point set,
    by enumerating faces: on each subset, solve the affine stationarity
    system and keep solutions with nonnegative weights."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    m = pts.shape[0]
    if m > 16:
        raise ValueError("exact enumeration limited to 16 points")
    best_point, best_dist = None, np.inf
    for mask in range(1, 2 ** m):
        idx = [i for i in range(m) if mask >> i & 1]
        sub = pts[idx]
        k = len(idx)
        # project 0 onto the affine hull of the subset: bordered KKT
        # system for min |lam' sub|^2 subject to sum(lam) = 1
        kkt = np.zeros((k + 1, k + 1))
        kkt[:k, :k] = sub @ sub.T
        kkt[:k, k] = 1.0
        kkt[k, :k] = 1.0
        rhs = np.zeros(k + 1)
        rhs[k] = 1.0
        sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
        lam = sol[:k]
        if abs(lam.sum() - 1.0) > 1e-9 or np.any(lam < -1e-12):
            continue
        point = lam @ sub
        dist = float(np.linalg.norm(point))
        if dist < best_dist:
            best_point, best_dist = point, dist
    return best_point, best_dist


def _dual_value_grad(f: MaxQuadSubdiff, lam: np.ndarray):
    """Concave dual of min max_i q_i: for weights lam on the simplex,
    value = min_x sum lam_i q_i(x), gradient component i = q_i(x(lam))."""
    P = sum(l * Pi for l, (Pi, _, _) in zip(lam, f.quadratics))
    b = sum(l * bi for l, (_, bi, _) in zip(lam, f.quadratics))
    c = sum(l * ci for l, (_, _, ci) in zip(lam, f.quadratics))
    x = -np.linalg.solve(P, b)
    value = 0.5 * x @ (P @ x) + b @ x + c
    grad = f.piece_values(x)
    return float(value), grad, x


def _solve_dual(f: MaxQuadSubdiff) -> tuple[float, np.ndarray]:
    m = len(f.quadratics)
    starts = [np.ones(m) / m] + [0.9 * np.eye(m)[i] + 0.1 / m
                                 for i in range(m)]
    best_val, best_x = -np.inf, None
    for lam0 in starts:
        res = scipy_minimize(
            lambda lam: tuple(-v for v in _dual_value_grad(f, lam)[:2]),
            lam0, jac=True, method="SLSQP",
            bounds=[(0.0, 1.0)] * m,
            constraints=[{"type": "eq", "fun": lambda lam: lam.sum() - 1.0,
                          "jac": lambda lam: np.ones(m)}],
            options={"maxiter": 500, "ftol": 1e-14})
        val, _, x = _dual_value_grad(f, np.clip(res.x, 0.0, None)
                                     / np.clip(res.x, 0.0, None).sum())
        if val > best_val:
            best_val, best_x = val, x
    return best_val, best_x


def _solve_epigraph(f: MaxQuadSubdiff) -> float:
    import cvxpy as cp

    n = f.dimension
    x = cp.Variable(n)
    t = cp.Variable()
    constraints = [0.5 * cp.quad_form(x, cp.psd_wrap(P)) + b @ x + c <= t
                   for P, b, c in f.quadratics]
    prob = cp.Problem(cp.Minimize(t), constraints)
    with warnings.catch_warnings():
        # tighter-than-default tolerances trip cvxpy's accuracy warning;
        # agreement with the dual route is checked explicitly instead
        warnings.simplefilter("ignore", UserWarning)
        prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12,
                   tol_feas=1e-12)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        raise OracleDisagreement(f"epigraph solve failed: {prob.status}")
    return float(t.value)


def reference_optimum(f: MaxQuadSubdiff,
                      agree_tol: float = 1e-9,
                      cert_tol: float = 1e-7,
                      ) -> tuple[float, np.ndarray]:
    """Externally computed minimum of a max-of-quadratics objective.

    Two independent routes must agree: maximizing the smooth concave
    dual over the weight simplex, and an interior-point solve of the
    epigraph form.  A stationarity certificate (distance from 0 to the
    hull of the active gradients) is also required.
    """
    f_dual, x_star = _solve_dual(f)
    f_epi = _solve_epigraph(f)
    if abs(f_dual - f_epi) > agree_tol * (1.0 + abs(f_dual)):
        raise OracleDisagreement(
            f"dual {f_dual!r} vs epigraph {f_epi!r} beyond tolerance")
    vals = f.piece_values(x_star)
    top = float(np.max(vals))
    active = np.flatnonzero(vals >= top - 1e-6 * (1.0 + abs(top)))
    grads = np.array([f.piece_gradient(i, x_star) for i in active])
    _, dist = min_norm_in_hull(grads)
    if dist > cert_tol:
        raise OracleDisagreement(
            f"stationarity certificate failed: dist {dist:g}")
    return f_dual, x_star


# ---------------------------------------------------------------------------
# trace analytics

def lagged_autocorrelation(series, lag: int) -> float:
    x = np.asarray(series, dtype=float)
    x = x - x.mean()
    denom = float(x @ x)
    if denom == 0.0:
        return 1.0
    return float(x[:-lag] @ x[lag:]) / denom


def detect_cycle(series, burn_in: int = 20,
                 max_period: int = 10) -> tuple[int, float]:
    """Return (lag, autocorrelation) for the strongest periodicity in
    the post-burn-in tail of a scalar series."""
    tail = np.asarray(series, dtype=float)[burn_in:]
    best_lag, best_score = 0, -np.inf
    for lag in range(1, min(max_period, tail.size - 1) + 1):
        score = lagged_autocorrelation(tail, lag)
        if score > best_score:
            best_lag, best_score = lag, score
    return best_lag, best_score


def linear_rate_fit(ks, gaps) -> tuple[float, float]:
    """Least-squares fit of log(gap) against iteration count.

    Returns (slope, r_squared); nonpositive gaps are dropped.
    """
    ks = np.asarray(ks, dtype=float)
    gaps = np.asarray(gaps, dtype=float)
    keep = gaps > 0
    ks, logg = ks[keep], np.log(gaps[keep])
    if ks.size < 3:
        return float("nan"), float("nan")
    coeffs = np.polyfit(ks, logg, 1)
    pred = np.polyval(coeffs, ks)
    ss_res = float(np.sum((logg - pred) ** 2))
    ss_tot = float(np.sum((logg - logg.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coeffs[0]), r2


def loglog_slope(xs, ys) -> float:
    """Slope of log(y) against log(x)."""
    return float(np.polyfit(np.log(np.asarray(xs, float)),
                            np.log(np.asarray(ys, float)), 1)[0])
