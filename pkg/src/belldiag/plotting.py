"""Render 2-D summary figures from sweep rows.

Werner-line sweeps get the measure curves and a fidelity curve with the
maximally-mixed worst-case benchmark; tetrahedron sweeps get coordinate-
plane projections colored by each measure plus a fidelity histogram.
Figures land next to the delimited output; the CSV/JSON tables remain the
primary plot-data interface (no 3-D rendering here).
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .measures import fidelity_worst_werner

MEASURE_LABELS = {
    "eof": "entanglement of formation",
    "concurrence": "concurrence",
    "chsh_L": "CHSH non-locality L",
    "steering3": "3-steering S3",
    "mutual_info": "mutual information",
    "classical_corr": "classical correlation",
    "discord": "discord",
}

_STYLE = {
    "figure.figsize": (6.0, 3.8),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.fontsize": 8,
    "savefig.dpi": 160,
}


def _column(rows, name):
    return np.array([float(r[name]) for r in rows])


def _save(fig, path: Path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_werner_line(rows, out_dir, prefix: str = "werner") -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    w = _column(rows, "w")
    written = []
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for key in ("eof", "steering3", "chsh_L", "mutual_info", "classical_corr", "discord"):
            ax.plot(w, _column(rows, key), label=MEASURE_LABELS[key], lw=1.4)
        ax.set_xlabel("w")
        ax.set_ylabel("measure (bits / normalized)")
        ax.legend(loc="upper left")
        written.append(_save(fig, out_dir / f"{prefix}_measures.png"))

        fig, ax = plt.subplots()
        ax.plot(w, _column(rows, "fidelity"), "o-", ms=2.5, lw=1.2, label="fidelity")
        dense = np.linspace(0, 1, 200)
        ax.plot(
            dense,
            [fidelity_worst_werner(x) for x in dense],
            "k--",
            lw=1,
            label="maximally mixed benchmark",
        )
        ax.set_xlabel("w")
        ax.set_ylabel("fidelity")
        ax.set_ylim(0, 1.02)
        ax.legend(loc="lower left")
        written.append(_save(fig, out_dir / f"{prefix}_fidelity.png"))
    return written


def plot_tetrahedron(rows, out_dir, prefix: str = "tetra") -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t1, t2, t3 = (_column(rows, k) for k in ("t1", "t2", "t3"))
    written = []
    with plt.rc_context(_STYLE):
        for key in ("eof", "chsh_L", "steering3", "discord"):
            vals = _column(rows, key)
            fig, axes = plt.subplots(1, 3, figsize=(9.0, 3.2), sharey=True)
            for ax, (x, y, lx, ly) in zip(
                axes,
                ((t1, t2, "t1", "t2"), (t1, t3, "t1", "t3"), (t2, t3, "t2", "t3")),
            ):
                sc = ax.scatter(x, y, c=vals, s=8, cmap="viridis", vmin=0)
                ax.set_xlabel(lx)
                ax.set_ylabel(ly)
            fig.colorbar(sc, ax=axes, shrink=0.85, label=MEASURE_LABELS[key])
            fig.savefig(out_dir / f"{prefix}_{key}.png")
            plt.close(fig)
            written.append(out_dir / f"{prefix}_{key}.png")

        fig, ax = plt.subplots()
        ax.hist(_column(rows, "fidelity"), bins=40)
        ax.set_xlabel("fidelity")
        ax.set_ylabel("states")
        written.append(_save(fig, out_dir / f"{prefix}_fidelity_hist.png"))
    return written


def plot_single(rows, out_dir, prefix: str = "state") -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    row = rows[0]
    keys = list(MEASURE_LABELS)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.bar(range(len(keys)), [float(row[k]) for k in keys])
        ax.set_xticks(range(len(keys)))
        ax.set_xticklabels(keys, rotation=30, ha="right")
        ax.set_ylabel("value")
        return [_save(fig, out_dir / f"{prefix}_measures.png")]


def render_figures(rows, out_dir, mode: str, prefix: str | None = None) -> list[Path]:
    """Dispatch on sweep mode; rows are dicts (e.g. from SweepRow.to_dict or
    a re-parsed CSV)."""
    if mode == "werner-line":
        return plot_werner_line(rows, out_dir, prefix or "werner")
    if mode == "tetrahedron":
        return plot_tetrahedron(rows, out_dir, prefix or "tetra")
    if mode == "single":
        return plot_single(rows, out_dir, prefix or "state")
    raise ValueError(f"unknown sweep mode {mode!r}")


def infer_mode(rows) -> str:
    """Guess the sweep mode of re-parsed rows from their coordinates."""
    if len(rows) == 1:
        return "single"
    ws = _column(rows, "w")
    return "tetrahedron" if np.isnan(ws).any() else "werner-line"
