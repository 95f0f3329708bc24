"""Result reports: delimited residual traces and companion figures.

The CSV column order is fixed (n, q_re, q_im, order, coeff_re, coeff_im,
coeff_abs, residual) so downstream plotting stays stable.  Figures are
rendered next to the CSV with matplotlib's file-only backend: the
residual decay on a log scale and the selected parameters inside the
unit disc.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .poafd import ExpansionResult

CSV_COLUMNS = ["n", "q_re", "q_im", "order", "coeff_re", "coeff_im", "coeff_abs", "residual"]


def write_expansion_csv(path: str | Path, result: ExpansionResult) -> Path:
    """One row per selected term, residual column is the norm after the term."""
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for k in range(result.n_terms):
            param = result.system.params[k]
            coeff = result.coefficients[k]
            writer.writerow(
                [
                    k + 1,
                    repr(float(param.q.real)) if param is not None else "",
                    repr(float(param.q.imag)) if param is not None else "",
                    param.order if param is not None else "",
                    repr(float(coeff.real)),
                    repr(float(coeff.imag)),
                    repr(float(abs(coeff))),
                    repr(float(result.residual_norms[k + 1])),
                ]
            )
    return path


def render_figures(
    result: ExpansionResult,
    out_prefix: str | Path,
    defect: float | None = None,
    r_max: float | None = None,
) -> list[Path]:
    """Residual-decay and parameter-location figures next to the CSV report.

    When a pseudo-inversion defect is given, the residual plot also shows
    the total approximation error floor it implies.
    """
    prefix = Path(out_prefix)
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    steps = np.arange(len(result.residual_norms))
    positive = result.residual_norms > 0
    ax.semilogy(steps[positive], result.residual_norms[positive], marker="o", ms=3, lw=1.0)
    if defect is not None and defect > 0:
        total = np.hypot(result.residual_norms, defect)
        ax.semilogy(steps, total, ls="--", lw=1.0, label="total error incl. defect")
        ax.axhline(defect, color="gray", lw=0.8, ls=":", label="defect floor")
        ax.legend(fontsize=8)
    ax.set_xlabel("terms")
    ax.set_ylabel("residual norm")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    residual_path = prefix.with_name(prefix.name + "_residual.png")
    fig.savefig(residual_path, dpi=150)
    plt.close(fig)
    written.append(residual_path)

    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    circle = np.exp(1j * np.linspace(0, 2 * np.pi, 361))
    ax.plot(circle.real, circle.imag, color="black", lw=1.0)
    if r_max:
        ax.plot(r_max * circle.real, r_max * circle.imag, color="gray", lw=0.7, ls=":")
    params = [p for p in result.system.params if p is not None]
    if params:
        qs = np.array([p.q for p in params])
        orders = np.array([p.order for p in params])
        sizes = 12 + 28 * np.abs(result.coefficients[: len(qs)]) / (
            np.max(np.abs(result.coefficients[: len(qs)])) + 1e-30
        )
        sc = ax.scatter(qs.real, qs.imag, s=sizes, c=orders, cmap="viridis", zorder=3)
        if orders.max() > 0:
            fig.colorbar(sc, ax=ax, label="derivative order", shrink=0.8)
    ax.set_aspect("equal")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_xlabel("Re q")
    ax.set_ylabel("Im q")
    fig.tight_layout()
    params_path = prefix.with_name(prefix.name + "_params.png")
    fig.savefig(params_path, dpi=150)
    plt.close(fig)
    written.append(params_path)
    return written
