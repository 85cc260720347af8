"""Objective oracles for the minimization loops.

An objective exposes ``value(x)`` and ``subgradient(x, direction)``,
where the subgradient returned is the one maximizing the inner product
with ``direction`` over the subdifferential at x.  For smooth objectives
the direction is ignored and the gradient returned.

`MaxQuadSubdiff` (in `oracles`) already satisfies this interface.
"""
from __future__ import annotations

import numpy as np


class QuadraticObjective:
    """f(x) = |Rx|^2 / 2 for an invertible matrix R (smooth, strictly
    convex); gradient R'Rx."""

    def __init__(self, R: np.ndarray):
        self.R = np.asarray(R, dtype=float)
        np.linalg.inv(self.R)
        self.dimension = self.R.shape[0]

    def value(self, x) -> float:
        r = self.R @ np.asarray(x, dtype=float)
        return 0.5 * float(r @ r)

    def subgradient(self, x, direction=None) -> np.ndarray:
        return self.R.T @ (self.R @ np.asarray(x, dtype=float))


class SmoothObjective:
    """Wrap arbitrary value/gradient callables as an objective."""

    def __init__(self, value_fn, grad_fn, dimension: int):
        self._value = value_fn
        self._grad = grad_fn
        self.dimension = dimension

    def value(self, x) -> float:
        return float(self._value(np.asarray(x, dtype=float)))

    def subgradient(self, x, direction=None) -> np.ndarray:
        return np.asarray(self._grad(np.asarray(x, dtype=float)), dtype=float)


class SupportFunctionObjective:
    """f(x) = max_i a_i'x, the support function of a finite point set.

    The subdifferential at x is the hull of the active points; the
    directional-argmax rule picks, among active points, the one with the
    largest inner product with the direction (lowest index on ties).
    """

    def __init__(self, points, activity_tol: float = 1e-10):
        self.points = np.atleast_2d(np.asarray(points, dtype=float))
        self.activity_tol = activity_tol
        self.dimension = self.points.shape[1]

    def value(self, x) -> float:
        return float(np.max(self.points @ np.asarray(x, dtype=float)))

    def subgradient(self, x, direction) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        vals = self.points @ x
        top = float(np.max(vals))
        cut = top - self.activity_tol * (1.0 + abs(top))
        active = np.flatnonzero(vals >= cut)
        scores = self.points[active] @ np.asarray(direction, dtype=float)
        return self.points[active[int(np.argmax(scores))]].copy()
