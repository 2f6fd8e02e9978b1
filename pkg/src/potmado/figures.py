"""Matplotlib rendering of metrics and curve CSV outputs.

Figures are written next to the delimited output they illustrate, using
the Agg backend (no display required).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["estimator_label", "render_metrics_figures", "render_curve_figure"]

_METRICS = (("MSE_sum", "MSE (sum over grid)"), ("Var_sum", "variance (sum over grid)"), ("B_sum", "squared bias (sum over grid)"))


def estimator_label(scheme: str, c: float) -> str:
    """Short legend label: D for the disjoint c=1 estimator, O(c=...) for sliding."""
    if scheme == "disjoint":
        return "D" if c == 1.0 else f"D(c={c:g})"
    return f"O(c={c:g})"


def render_metrics_figures(records, csv_path) -> list[Path]:
    """One figure per (copula, metric): metric versus block size m, one line per estimator."""
    csv_path = Path(csv_path)
    stem = csv_path.with_suffix("")
    copulas = sorted({r.copula for r in records})
    estimators = sorted({(r.scheme, r.c) for r in records})
    written: list[Path] = []
    for copula in copulas:
        subset = [r for r in records if r.copula == copula]
        for field, title in _METRICS:
            fig, ax = plt.subplots(figsize=(7.0, 4.4), dpi=130)
            for scheme, c in estimators:
                cell = sorted(
                    (r for r in subset if r.scheme == scheme and r.c == c),
                    key=lambda r: r.m,
                )
                if not cell:
                    continue
                ax.plot(
                    [r.m for r in cell],
                    [getattr(r, field) for r in cell],
                    marker="o",
                    markersize=3,
                    linewidth=1.2,
                    label=estimator_label(scheme, c),
                )
            ax.set_xlabel("block size m")
            ax.set_ylabel(title)
            ax.set_title(f"{copula}: {title} vs block size")
            ax.grid(True, alpha=0.3)
            ax.legend(fontsize=8)
            fig.tight_layout()
            out = Path(f"{stem}_{copula}_{field.lower()}.png")
            fig.savefig(out)
            plt.close(fig)
            written.append(out)
    return written


def render_curve_figure(curve, csv_path, title: str | None = None) -> Path:
    """Plot one Pickands curve with its admissible envelope (and error band if present)."""
    csv_path = Path(csv_path)
    out = csv_path.with_suffix(".png")
    fig, ax = plt.subplots(figsize=(6.4, 4.4), dpi=130)
    tt = np.linspace(0.0, 1.0, 201)
    ax.plot(tt, np.maximum(tt, 1.0 - tt), linestyle="--", color="grey", linewidth=1.0, label="bounds")
    ax.plot(tt, np.ones_like(tt), linestyle="--", color="grey", linewidth=1.0)
    if curve.stderr is not None:
        ax.fill_between(
            curve.grid,
            curve.values - 3.0 * curve.stderr,
            curve.values + 3.0 * curve.stderr,
            alpha=0.25,
            label="±3 SE",
        )
    ax.plot(curve.grid, curve.values, linewidth=1.5, label="A(t)")
    ax.set_xlabel("t")
    ax.set_ylabel("A(t)")
    ax.set_ylim(0.45, 1.1)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
    return out
