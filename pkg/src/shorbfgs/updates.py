"""Rank-one metric rescaling kernels.

The building blocks used by every separator and minimizer in this
package: the symmetric Shor dilation, the unit-step BFGS update of an
inverse-Hessian approximation (dense and Cholesky-factored forms), the
non-symmetric rank-one transform used by the Cholesky-style separators,
and the ellipsoid-method update.

All matrices here are dense and small (the experiments never exceed a
few dozen dimensions), so no attempt is made at low-rank or sparse
storage.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    CurvatureViolation,
    DegenerateCurvature,
    DegenerateDirection,
    DegenerateGradient,
    InvalidDilation,
    NonDescentDirection,
)

# Norm below which a direction counts as zero.
NORM_FLOOR = 1e-14
# s'y <= CURVATURE_FLOOR * |s| * |y| is treated as a curvature violation:
# the update is undefined at exactly zero and catastrophically
# ill-conditioned near it.
CURVATURE_FLOOR = 1e-14


class TransformKind(Enum):
    IDENTITY = "identity"
    SHOR_DILATION = "shor-dilation"
    BFGS_FACTOR = "bfgs-factor"


@dataclass(frozen=True)
class RescalingTransform:
    """An invertible matrix together with how it was constructed."""

    matrix: np.ndarray
    kind: TransformKind

    @classmethod
    def identity(cls, n: int) -> "RescalingTransform":
        return cls(np.eye(n), TransformKind.IDENTITY)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def symmetrize(H: np.ndarray) -> np.ndarray:
    """Average away rounding asymmetry accumulated over many updates."""
    return 0.5 * (H + H.T)


def is_spd(H: np.ndarray, sym_tol: float = 1e-12) -> bool:
    """Symmetric (entrywise within ``sym_tol``) and Cholesky-factorizable."""
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        return False
    if not np.all(np.abs(H - H.T) <= sym_tol):
        return False
    try:
        np.linalg.cholesky(symmetrize(H))
    except np.linalg.LinAlgError:
        return False
    return True


def shor_dilation(e: np.ndarray, beta: float = 2.0,
                  norm_floor: float = NORM_FLOOR) -> RescalingTransform:
    """Symmetric dilation W = I - e e' / (beta |e|^2).

    W contracts the direction e by the factor 1 - 1/beta and fixes its
    orthogonal complement, so det W = 1 - 1/beta.
    """
    e = np.asarray(e, dtype=float)
    if beta <= 1.0:
        raise InvalidDilation(f"dilation constant must exceed 1, got {beta}")
    nrm2 = float(e @ e)
    if nrm2 <= norm_floor ** 2:
        raise DegenerateDirection("dilation direction has near-zero norm")
    W = np.eye(e.size) - np.outer(e, e) / (beta * nrm2)
    return RescalingTransform(W, TransformKind.SHOR_DILATION)


def curvature(s: np.ndarray, y: np.ndarray,
              floor: float = CURVATURE_FLOOR) -> float:
    """Return s'y, raising CurvatureViolation if it is not safely positive."""
    sty = float(s @ y)
    if sty <= floor * np.linalg.norm(s) * np.linalg.norm(y):
        raise CurvatureViolation(f"s'y = {sty:g} is not safely positive")
    return sty


def bfgs_update(H: np.ndarray, g: np.ndarray, g_plus: np.ndarray,
                curvature_floor: float = CURVATURE_FLOOR) -> np.ndarray:
    """Unit-step BFGS update of the inverse-Hessian approximation H.

    With s = -Hg and y = g_plus - g, returns
    V H V' + s s' / (s'y) for V = I - s y' / (s'y), evaluated via the
    expanded rank-two formula (O(n^2), no V assembled).  The result
    satisfies the secant condition H_+ y = s and the determinant identity
    det H_+ / det H = -s'g / s'y.
    """
    H = np.asarray(H, dtype=float)
    g = np.asarray(g, dtype=float)
    s = -H @ g
    if np.linalg.norm(s) <= NORM_FLOOR:
        raise DegenerateGradient("trial step -Hg has near-zero norm")
    y = np.asarray(g_plus, dtype=float) - g
    sty = curvature(s, y, curvature_floor)
    Hy = H @ y
    H_plus = (H
              - (np.outer(s, Hy) + np.outer(Hy, s)) / sty
              + ((sty + y @ Hy) / sty ** 2) * np.outer(s, s))
    return symmetrize(H_plus)


def bfgs_update_factored(T: RescalingTransform | np.ndarray,
                         g: np.ndarray, g_plus: np.ndarray,
                         curvature_floor: float = CURVATURE_FLOOR,
                         ) -> RescalingTransform:
    """Update the factored form H = T'T of the inverse-Hessian metric.

    Returns T_+ = T (I - q s') with
    q = y/(s'y) + g / sqrt(-s'g s'y), which satisfies
    T_+' T_+ = bfgs_update(T'T, g, g_plus) up to rounding.
    """
    Tm = T.matrix if isinstance(T, RescalingTransform) else np.asarray(T, float)
    g = np.asarray(g, dtype=float)
    s = -Tm.T @ (Tm @ g)
    if np.linalg.norm(s) <= NORM_FLOOR:
        raise DegenerateGradient("trial step -T'Tg has near-zero norm")
    y = np.asarray(g_plus, dtype=float) - g
    sty = curvature(s, y, curvature_floor)
    stg = float(s @ g)
    if stg >= 0.0:
        raise NonDescentDirection(f"s'g = {stg:g} is not negative")
    q = y / sty + g / np.sqrt(-stg * sty)
    T_plus = Tm @ (np.eye(Tm.shape[0]) - np.outer(q, s))
    return RescalingTransform(T_plus, TransformKind.BFGS_FACTOR)


def bfgs_w_matrix(h: np.ndarray, p: np.ndarray,
                  floor: float = CURVATURE_FLOOR) -> RescalingTransform:
    """Non-symmetric rank-one transform used by Cholesky-style separators.

    With e = h - p and beta = h'e, returns
    W = I - e h'/beta + h h'/(|h| sqrt(beta)), a rank-one perturbation of
    the identity (generally not symmetric).
    """
    h = np.asarray(h, dtype=float)
    p = np.asarray(p, dtype=float)
    e = h - p
    beta = float(h @ e)
    hnorm = float(np.linalg.norm(h))
    if hnorm <= NORM_FLOOR:
        raise DegenerateGradient("h has near-zero norm")
    if beta <= floor * hnorm * max(np.linalg.norm(e), hnorm):
        raise DegenerateCurvature(f"beta = h'(h-p) = {beta:g} is not safely positive")
    W = (np.eye(h.size)
         - np.outer(e, h) / beta
         + np.outer(h, h) / (hnorm * np.sqrt(beta)))
    return RescalingTransform(W, TransformKind.BFGS_FACTOR)


def ellipsoid_update(H: np.ndarray, g: np.ndarray,
                     ) -> tuple[np.ndarray, np.ndarray]:
    """One ellipsoid-method update of the center increment and metric.

    With s = -Hg, returns the iterate increment s/((n+1) sqrt(-s'g)) and
    H_+ = n^2/(n^2-1) (H + 2 s s' / ((n+1) s'g)).
    """
    H = np.asarray(H, dtype=float)
    g = np.asarray(g, dtype=float)
    n = H.shape[0]
    if n < 2:
        raise ValueError("ellipsoid update requires dimension >= 2")
    if np.linalg.norm(g) <= NORM_FLOOR:
        raise DegenerateGradient("gradient has near-zero norm")
    s = -H @ g
    stg = float(s @ g)  # equals -g'Hg < 0
    step = s / ((n + 1) * np.sqrt(-stg))
    H_plus = (n ** 2 / (n ** 2 - 1.0)) * (H + 2.0 * np.outer(s, s)
                                          / ((n + 1) * stg))
    return step, symmetrize(H_plus)
