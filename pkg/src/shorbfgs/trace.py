"""Run traces and shared run configuration.

A RunTrace carries one dict per iteration (the quantities each algorithm
monitors: step norms, termination statistics, cosines, determinants,
eigenvalue extremes) plus a terminal Outcome and, for separations, the
certificate normal.  Traces serialize to CSV (17 significant digits) or
JSON.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

FLOAT_FMT = "%.17g"


class Outcome(Enum):
    SEPARATED = "separated"
    MEMBERSHIP_CERTIFIED = "membership-certified"
    STEP_VANISHED = "step-vanished"
    MAX_ITERATIONS = "max-iterations"
    CURVATURE_FAILURE = "curvature-failure"
    DESCENT = "descent"
    CONVERGED = "converged"


# Outcomes that count as a successful run for exit-code purposes.
SUCCESS_OUTCOMES = frozenset({
    Outcome.SEPARATED,
    Outcome.MEMBERSHIP_CERTIFIED,
    Outcome.STEP_VANISHED,
    Outcome.DESCENT,
    Outcome.CONVERGED,
})


@dataclass
class SeparatorConfig:
    """Run parameters shared by every separator."""

    max_iterations: int = 10000
    step_tol: float = 1e-12
    step_tol_rel: float = 0.0     # relative to the first step/h norm
    dilation_beta: float = 2.0
    seed: int = 0
    track_spectrum: bool = True
    curvature_floor: float = 1e-14

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.step_tol < 0:
            raise ValueError("step_tol must be nonnegative")
        if self.dilation_beta <= 1:
            raise ValueError("dilation_beta must exceed 1")


@dataclass
class MinimizerConfig:
    """Run parameters shared by the minimization loops."""

    max_iterations: int = 10000
    step_tol: float = 1e-12
    gap_tol: float = 1e-12        # used only when f_star is supplied
    seed: int = 0
    curvature_floor: float = 1e-14
    store_iterates: bool = False


@dataclass
class RunTrace:
    algorithm: str
    rows: list[dict] = field(default_factory=list)
    outcome: Outcome = Outcome.MAX_ITERATIONS
    normal: np.ndarray | None = None
    wall_time: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows])

    def columns(self) -> list[str]:
        return list(self.rows[0].keys()) if self.rows else []

    def to_csv(self, path) -> None:
        cols = self.columns()
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for row in self.rows:
                fh.write(",".join(_fmt(row[c]) for c in cols) + "\n")

    def to_json(self, path) -> None:
        payload = {
            "algorithm": self.algorithm,
            "outcome": self.outcome.value,
            "iterations": self.iterations,
            "wall_time": self.wall_time,
            "normal": None if self.normal is None else list(self.normal),
            "rows": self.rows,
            "extras": {k: _jsonable(v) for k, v in self.extras.items()},
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return FLOAT_FMT % float(value)


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value
