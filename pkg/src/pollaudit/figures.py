"""Rendering of comparison figures alongside the delimited output.

Uses the Agg backend only; files are written, nothing is shown.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pollaudit.tables import TableComparison


def render_kplus_figure(comparison: TableComparison, path: str | Path) -> Path:
    """Minimum winner votes k+ against sample size, one line per audit."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ns = list(comparison.schedule)
    for label, series in zip(comparison.labels, comparison.k_plus):
        pts = [(n, k) for n, k in zip(ns, series) if k is not None]
        if pts:
            ax.plot(*zip(*pts), marker="o", markersize=3, linewidth=1.2, label=label)
    ax.set_xlabel("sample size n")
    ax.set_ylabel("minimum winner votes $k^+$")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_delta_figure(comparison: TableComparison, path: str | Path) -> Path:
    """Pairwise k+ differences between successive audits against sample size."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ns = list(comparison.schedule)
    names = [f"{b} - {a}" for a, b in zip(comparison.labels, comparison.labels[1:])]
    for label, series in zip(names, comparison.deltas):
        pts = [(n, d) for n, d in zip(ns, series) if d is not None]
        if pts:
            ax.plot(*zip(*pts), marker="o", markersize=3, linewidth=1.2, label=label)
    ax.axhline(0, color="black", linewidth=0.7)
    ax.set_xscale("log")
    ax.set_xlabel("sample size n")
    ax.set_ylabel("difference in $k^+$")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
