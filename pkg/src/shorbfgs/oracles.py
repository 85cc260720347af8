"""Linear-optimization (support-function) oracles over compact sets.

Every oracle answers one question: given a direction, which point of the
set maximizes the linear functional, and what is the maximum value?
Concrete sets: finite point lists, ellipsoid boundaries, balls, and the
subdifferentials of a pointwise maximum of strictly convex quadratics.

Oracles are immutable after construction; the separators that need to
rescale a set do so through accumulated transforms (`transformed_argmin`)
rather than by rewriting the oracle.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroDirection
from .updates import NORM_FLOOR, RescalingTransform


class SupportOracle:
    """Interface: linear optimization over a fixed compact set."""

    dimension: int
    description: str = ""

    def argmax_linear(self, direction: np.ndarray) -> tuple[np.ndarray, float]:
        raise NotImplementedError

    def argmin_linear(self, direction: np.ndarray) -> tuple[np.ndarray, float]:
        point, value = self.argmax_linear(-np.asarray(direction, dtype=float))
        return point, -value


class FiniteSetOracle(SupportOracle):
    """A finite list of points; ties break to the lowest index."""

    def __init__(self, points, description: str = "finite set"):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.size == 0:
            raise ValueError("point set must be nonempty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point set contains non-finite entries")
        self.points = pts
        self.dimension = pts.shape[1]
        self.description = description

    def __len__(self) -> int:
        return self.points.shape[0]

    def argmax_linear(self, direction):
        values = self.points @ np.asarray(direction, dtype=float)
        idx = int(np.argmax(values))  # first maximizer: lowest index
        return self.points[idx].copy(), float(values[idx])


class EllipsoidOracle(SupportOracle):
    """Boundary of the ellipsoid A B - c, with B the closed unit ball.

    argmax of <., s> is A (A's / |A's|) - c; only boundary points are
    ever returned.
    """

    def __init__(self, A, c=None, description: str = "ellipsoid boundary"):
        self.A = np.asarray(A, dtype=float)
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise ValueError("A must be square")
        # Invertibility check; raises LinAlgError for singular A.
        np.linalg.inv(self.A)
        self.c = np.zeros(n) if c is None else np.asarray(c, dtype=float)
        self.dimension = n
        self.description = description

    def argmax_linear(self, direction):
        s = np.asarray(direction, dtype=float)
        w = self.A.T @ s
        nrm = np.linalg.norm(w)
        if nrm <= NORM_FLOOR:
            raise ZeroDirection("ellipsoid oracle needs a normalizable direction")
        point = self.A @ (w / nrm) - self.c
        return point, float(point @ s)


class BallOracle(SupportOracle):
    """A Euclidean ball of given center and radius (boundary points)."""

    def __init__(self, center, radius: float = 1.0,
                 description: str = "ball"):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.dimension = self.center.size
        self.description = description

    def argmax_linear(self, direction):
        s = np.asarray(direction, dtype=float)
        nrm = np.linalg.norm(s)
        if nrm <= NORM_FLOOR:
            raise ZeroDirection("ball oracle needs a normalizable direction")
        point = self.center + self.radius * s / nrm
        return point, float(point @ s)


@dataclass
class MaxQuadSubdiff:
    """f(x) = max_i (x'P_i x / 2 + b_i'x + c_i) with each P_i positive
    definite, together with its subdifferential oracle.

    `subdiff_argmax(x, s)` picks, among the gradients of the pieces
    active at x (relative tolerance `activity_tol`), the one with the
    largest inner product with s, breaking ties to the lowest index.  At
    smooth points this is just the gradient.
    """

    quadratics: list[tuple[np.ndarray, np.ndarray, float]]
    activity_tol: float = 1e-10
    description: str = "max of quadratics"

    def __post_init__(self):
        self.quadratics = [(np.asarray(P, float), np.asarray(b, float),
                            float(c)) for P, b, c in self.quadratics]
        for P, b, _ in self.quadratics:
            np.linalg.cholesky(P)  # strict convexity of every piece
        self.dimension = self.quadratics[0][1].size

    def piece_values(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.array([0.5 * x @ (P @ x) + b @ x + c
                         for P, b, c in self.quadratics])

    def value(self, x: np.ndarray) -> float:
        return float(np.max(self.piece_values(x)))

    def active_indices(self, x: np.ndarray) -> np.ndarray:
        vals = self.piece_values(x)
        top = float(np.max(vals))
        cut = top - self.activity_tol * (1.0 + abs(top))
        return np.flatnonzero(vals >= cut)

    def piece_gradient(self, i: int, x: np.ndarray) -> np.ndarray:
        P, b, _ = self.quadratics[i]
        return P @ np.asarray(x, dtype=float) + b

    def subdiff_argmax(self, x: np.ndarray, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        active = self.active_indices(x)
        grads = [self.piece_gradient(i, x) for i in active]
        scores = [g @ s for g in grads]
        return grads[int(np.argmax(scores))]

    # Objective-oracle interface used by the minimizers.
    def subgradient(self, x: np.ndarray, direction: np.ndarray) -> np.ndarray:
        return self.subdiff_argmax(x, direction)


def transformed_argmin(oracle: SupportOracle,
                       V: RescalingTransform | np.ndarray,
                       h: np.ndarray) -> tuple[np.ndarray, float]:
    """argmin of <., h> over the transformed set V Q, without mutating Q.

    Equals V p for p the argmin of <., V'h> over Q.
    """
    Vm = V.matrix if isinstance(V, RescalingTransform) else np.asarray(V, float)
    h = np.asarray(h, dtype=float)
    p, _ = oracle.argmin_linear(Vm.T @ h)
    tp = Vm @ p
    return tp, float(tp @ h)
