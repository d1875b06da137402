"""Theory-curve generation along gain or visibility-squared axes.

Tables always carry both linear and decibel columns; the
``output_units`` field of a sweep only picks which one downstream
presentation (figures, primary plot axis) should lead with.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .model import (
    ModelParams,
    antisqueezed_noise,
    conjugate_noise,
    probe_noise,
    squeezed_noise,
)

__all__ = [
    "AXES",
    "OBSERVABLES",
    "SweepSpec",
    "SweepResult",
    "FamilyCurve",
    "sweep",
    "locate_minimum",
    "visibility_family",
]

AXES = ("gain", "vp2", "vc2")
OBSERVABLES = ("probe", "conjugate", "squeezed", "antisqueezed")

_OBS_FUNCS = {
    "probe": probe_noise,
    "conjugate": conjugate_noise,
    "squeezed": squeezed_noise,
    "antisqueezed": antisqueezed_noise,
}


@dataclass(frozen=True)
class SweepSpec:
    """A uniform parameter sweep around a base operating point.

    ``axis`` is ``gain``, ``vp2``, or ``vc2``; the visibility axes run
    over visibility squared, so the detector visibility applied is the
    square root of the axis value.
    """

    base: ModelParams
    axis: str
    lo: float
    hi: float
    n_points: int
    observables: tuple[str, ...] = OBSERVABLES
    output_units: str = "db"

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.n_points < 2:
            raise ValueError(f"need at least 2 grid points, got {self.n_points}")
        if not self.observables:
            raise ValueError("need at least one observable")
        unknown = [o for o in self.observables if o not in OBSERVABLES]
        if unknown:
            raise ValueError(f"unknown observable(s): {', '.join(unknown)}")
        if self.output_units not in ("linear", "db"):
            raise ValueError(f"output units must be linear or db, got {self.output_units!r}")
        if self.axis == "gain":
            if self.lo < 1.0:
                raise ValueError("gain axis must start at or above 1")
        elif not (0.0 <= self.lo and self.hi <= 1.0):
            raise ValueError("visibility-squared axes must lie within [0, 1]")


@dataclass
class SweepResult:
    spec: SweepSpec
    axis_values: np.ndarray
    linear: dict[str, np.ndarray]
    db: dict[str, np.ndarray]


def _point_params(spec: SweepSpec, value: float) -> ModelParams:
    if spec.axis == "gain":
        return replace(spec.base, gain=value)
    vis = float(np.sqrt(value))
    if spec.axis == "vp2":
        return replace(spec.base, v_p=vis)
    return replace(spec.base, v_c=vis)


def sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate the requested observables on a uniform grid."""
    grid = np.linspace(spec.lo, spec.hi, spec.n_points)
    columns = {name: np.empty(spec.n_points) for name in spec.observables}
    for i, value in enumerate(grid):
        params = _point_params(spec, float(value))
        for name in spec.observables:
            columns[name][i] = _OBS_FUNCS[name](params)
    db = {name: 10.0 * np.log10(col) for name, col in columns.items()}
    return SweepResult(spec=spec, axis_values=grid, linear=columns, db=db)


def locate_minimum(
    result: SweepResult, observable: str = "squeezed"
) -> tuple[float, float, float]:
    """Grid argmin refined by a parabola through the bracketing triple.

    Returns (axis value, linear minimum, dB minimum).  At a grid edge
    the edge point is returned unrefined.
    """
    if observable not in result.linear:
        raise ValueError(f"observable {observable!r} was not swept")
    x = result.axis_values
    y = result.linear[observable]
    i = int(np.argmin(y))
    if i == 0 or i == len(x) - 1:
        best_x, best_y = float(x[i]), float(y[i])
    else:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        curvature = y0 - 2.0 * y1 + y2
        if curvature <= 0.0:  # flat triple: keep the grid point
            best_x, best_y = float(x[i]), float(y1)
        else:
            step = x[i] - x[i - 1]
            offset = 0.5 * (y0 - y2) / curvature
            best_x = float(x[i] + offset * step)
            best_y = float(y1 - 0.125 * (y0 - y2) ** 2 / curvature)
    return best_x, best_y, float(10.0 * np.log10(best_y))


@dataclass
class FamilyCurve:
    visibility: float
    gains: np.ndarray
    squeezed_linear: np.ndarray
    squeezed_db: np.ndarray


def visibility_family(
    gains: Sequence[float],
    etas: tuple[float, float],
    eps: tuple[float, float],
    v_list: Sequence[float],
) -> list[FamilyCurve]:
    """Squeezed-noise-vs-gain curves, one per common detector visibility.

    Each visibility in ``v_list`` is applied to both detectors;
    ``etas`` and ``eps`` are the (probe, conjugate) transmittances and
    thermal fractions shared by every curve.
    """
    if len(v_list) == 0:
        raise ValueError("v_list must not be empty")
    gain_grid = np.asarray(list(gains), dtype=float)
    if gain_grid.size == 0:
        raise ValueError("gains must not be empty")

    curves = []
    for vis in v_list:
        linear = np.empty(gain_grid.size)
        for i, g in enumerate(gain_grid):
            params = ModelParams(
                gain=float(g),
                eta_p=etas[0],
                eta_c=etas[1],
                v_p=vis,
                v_c=vis,
                eps_p=eps[0],
                eps_c=eps[1],
            )
            linear[i] = squeezed_noise(params)
        curves.append(
            FamilyCurve(
                visibility=vis,
                gains=gain_grid.copy(),
                squeezed_linear=linear,
                squeezed_db=10.0 * np.log10(linear),
            )
        )
    return curves
