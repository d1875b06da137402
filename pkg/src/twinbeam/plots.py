"""Figure rendering for sweep and scan outputs.

Figures are drawn straight onto an Agg canvas and written to the given
path, so no interactive backend is ever touched; the file format
follows the path suffix (png, pdf, svg).
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from matplotlib.figure import Figure

from .estimate import EstimateSummary
from .sweeps import SweepResult

__all__ = ["render_sweep_figure", "render_scan_figure"]

_AXIS_LABELS = {
    "gain": "intensity gain",
    "vp2": "probe visibility squared",
    "vc2": "conjugate visibility squared",
}


def render_sweep_figure(result: SweepResult, path: str | Path) -> Path:
    """Plot every swept observable against the axis and save the figure."""
    path = Path(path)
    units = result.spec.output_units
    fig = Figure(figsize=(6.4, 4.4), dpi=150)
    ax = fig.add_subplot(111)
    columns = result.db if units == "db" else result.linear
    for name in result.spec.observables:
        ax.plot(result.axis_values, columns[name], label=name)
    shot = 0.0 if units == "db" else 1.0
    ax.axhline(shot, color="0.4", linewidth=0.8, linestyle="--", label="shot noise")
    ax.set_xlabel(_AXIS_LABELS[result.spec.axis])
    ax.set_ylabel("noise power (dB re shot)" if units == "db" else "noise power (shot-noise units)")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.savefig(path, bbox_inches="tight")
    return path


def render_scan_figure(
    entries: Sequence[tuple[float, EstimateSummary]], path: str | Path
) -> Path:
    """Plot recovered gain (mean with scatter bars) against the scanned
    probe thermal fraction and save the figure."""
    path = Path(path)
    eps = [e for e, _ in entries]
    means = [s.gain_mean for _, s in entries]
    stds = [s.gain_std for _, s in entries]

    fig = Figure(figsize=(6.4, 4.4), dpi=150)
    ax = fig.add_subplot(111)
    ax.errorbar(eps, means, yerr=stds, fmt="o-", capsize=3)
    ax.set_xlabel("assumed probe thermal fraction")
    ax.set_ylabel("recovered gain (mean ± std)")
    ax.grid(alpha=0.3)
    fig.savefig(path, bbox_inches="tight")
    return path
