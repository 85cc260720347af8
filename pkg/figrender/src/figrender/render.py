"""Renderers for the eight benchmark figures.

Each figure id maps to a documented CSV schema; rendering consumes only
the CSV contents, so the numerical package that produced them is not a
dependency.  Schema mismatches raise :class:`SchemaError` carrying the
column diff, and empty inputs are rejected before any file is written.
"""
from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGURE_SCHEMAS = {
    "fig1": ["seed", "k", "f", "gap", "accepted"],
    "fig2": ["eps", "algorithm", "run", "iterations", "outcome"],
    "fig3": ["eps", "k", "h1", "h2"],
    "fig4": ["d", "instance", "iterations", "outcome"],
    "fig5": ["k", "cos_ph"],
    "fig6": ["d", "instance", "iterations", "outcome"],
    "fig7": ["run", "k", "s_norm"],
    "fig8": ["n", "run", "iterations", "outcome"],
}

DPI = 120


class SchemaError(ValueError):
    """CSV columns do not match the figure's documented schema."""


def load_csv(path, figure: str) -> dict[str, np.ndarray]:
    """Read one CSV and validate it against the figure's schema.

    Returns a column dict; numeric columns become float arrays, the rest
    stay as string arrays.
    """
    expected = FIGURE_SCHEMAS[figure]
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file (no header)")
        rows = [row for row in reader if row]
    if header != expected:
        missing = [c for c in expected if c not in header]
        unexpected = [c for c in header if c not in expected]
        raise SchemaError(
            f"{path}: columns {header} do not match the {figure} schema "
            f"{expected} (missing {missing}, unexpected {unexpected})")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    out: dict[str, np.ndarray] = {}
    for j, name in enumerate(expected):
        values = [row[j] for row in rows]
        try:
            out[name] = np.array([float(v) for v in values])
        except ValueError:
            out[name] = np.array(values)
    return out


def _fig1(data, ax):
    for seed in np.unique(data["seed"]):
        mask = data["seed"] == seed
        ax.semilogy(data["k"][mask], data["gap"][mask], lw=0.8)
    ax.set_xlabel("iteration")
    ax.set_ylabel("objective gap")
    ax.set_title("linesearch-free BFGS on max-of-quadratics")


def _fig2(data, ax):
    for algo in sorted(set(data["algorithm"])):
        mask = data["algorithm"] == algo
        eps_vals = sorted(set(data["eps"][mask]), reverse=True)
        means = [data["iterations"][mask & (data["eps"] == e)].mean()
                 for e in eps_vals]
        ax.plot(eps_vals, means, marker="o", label=algo)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("ill-posedness eps")
    ax.set_ylabel("mean iterations")
    ax.legend()
    ax.set_title("simplex separation sweep")


def _fig3(data, ax):
    for eps in sorted(set(data["eps"]), reverse=True):
        mask = data["eps"] == eps
        ax.plot(data["h1"][mask], data["h2"][mask], marker=".", ms=2,
                lw=0.6, label=f"eps={eps:g}")
    ax.axhline(0.0, color="grey", lw=0.5)
    ax.axvline(0.0, color="grey", lw=0.5)
    ax.set_xlabel("h1")
    ax.set_ylabel("h2")
    ax.legend()
    ax.set_title("h-trajectories on the simplex instance")


def _histogram(data, ax, title):
    ds = sorted(set(data["d"]), reverse=True)
    for d in ds:
        counts = data["iterations"][data["d"] == d]
        ax.hist(counts, bins=30, alpha=0.6, label=f"d={d:g}")
    ax.set_xlabel("iterations to separation")
    ax.set_ylabel("instances")
    ax.legend()
    ax.set_title(title)


def _fig4(data, ax):
    _histogram(data, ax, "classic separation iteration counts")


def _fig6(data, ax):
    _histogram(data, ax, "BFGS-transform separation iteration counts")


def _fig5(data, ax):
    ax.plot(data["k"], data["cos_ph"], lw=0.7)
    ax.axhline(-0.01, color="red", ls="--", lw=1.0, label="-0.01 guide")
    ax.set_xlabel("iteration")
    ax.set_ylabel("cos angle(p, h)")
    ax.legend()
    ax.set_title("cycling failure instance")


def _fig7(data, ax):
    for run in np.unique(data["run"]):
        mask = data["run"] == run
        ax.semilogy(data["k"][mask], data["s_norm"][mask],
                    lw=0.4, alpha=0.3, color="C0")
    ax.set_xlabel("iteration")
    ax.set_ylabel("step norm |s|")
    ax.set_title("unit-ball iteration step decay")


def _fig8(data, ax):
    dims = sorted(set(data["n"].astype(int)))
    means = np.array([data["iterations"][data["n"] == n].mean()
                      for n in dims])
    logn = np.log(np.array(dims, dtype=float))
    slope, intercept = np.polyfit(logn, np.log(means), 1)
    ax.loglog(dims, means, "o", label="mean iterations")
    ax.loglog(dims, np.exp(intercept + slope * logn), "-",
              label=f"fitted slope {slope:.2f}")
    ref = 1.0 / np.sqrt(2.0)
    anchor = np.log(means[0]) - ref * logn[0]
    ax.loglog(dims, np.exp(anchor + ref * logn), "--",
              label=f"reference slope {ref:.3f}")
    ax.set_xlabel("dimension n")
    ax.set_ylabel("mean iterations to 1e-8")
    ax.legend()
    ax.set_title("dimension sweep")


_RENDERERS = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4,
              "fig5": _fig5, "fig6": _fig6, "fig7": _fig7, "fig8": _fig8}


def render(figure: str, csv_paths, out_path) -> None:
    """Render one figure from its CSV input(s) to a raster image."""
    if figure not in _RENDERERS:
        raise SchemaError(f"unknown figure id: {figure!r}")
    if not csv_paths:
        raise SchemaError("at least one input CSV is required")
    columns = [load_csv(p, figure) for p in csv_paths]
    data = {name: np.concatenate([c[name] for c in columns])
            for name in FIGURE_SCHEMAS[figure]}
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=DPI)
    try:
        _RENDERERS[figure](data, ax)
        fig.tight_layout()
        fig.savefig(out_path, dpi=DPI)
    finally:
        plt.close(fig)
