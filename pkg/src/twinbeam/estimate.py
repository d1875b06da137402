"""Recovery of gain and path transmissions from measured noise levels.

One measurement point fixes three independent numbers: the probe and
conjugate single-beam noises and the squeezed joint noise.  For assumed
thermal fractions the system inverts in closed form.  Writing
``w = V**2 + eps*(1 - V**2)`` for each detector, the single-beam noises
give the excess-noise products directly::

    A = (gain - 1) * eta_p = (N_probe - 1) / (2 * w_p)
    B = (gain - 1) * eta_c = (N_conj  - 1) / (2 * w_c)

and the correlation term of the squeezed noise then isolates::

    K = (1 + A*w_p + B*w_c - N_sq) / (2 * V_p * V_c * sqrt(A*B))
      = sqrt(gain / (gain - 1))

so ``gain = K**2 / (K**2 - 1)`` and the transmittances follow from A
and B.  A point is feasible only when both beams carry excess noise,
``K > 1``, and both recovered transmittances land in (0, 1]; infeasible
points are reported with the failed condition, never clamped into
range.  The anti-squeezed noise is withheld from the fit and used as a
posterior consistency check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .model import ModelParams, antisqueezed_noise, from_db, to_db

__all__ = [
    "MeasurementPoint",
    "EstimateResult",
    "EstimateSummary",
    "InsufficientDataError",
    "invert_point",
    "aggregate",
    "epsilon_scan",
]

# Slack on the eta <= 1 feasibility edge so that round-off on an exactly
# unit-transmission pipeline cannot flip it infeasible.
_ETA_SLACK = 1e-9


class InsufficientDataError(Exception):
    """Fewer than two feasible points: no scatter statistics exist."""


@dataclass(frozen=True)
class MeasurementPoint:
    """One noise measurement, decibels relative to shot noise.

    The dB values are taken after any electronic-floor correction;
    ``electronic_floor_db`` only records what was subtracted upstream.
    """

    probe_db: float
    conjugate_db: float
    squeezed_db: float
    antisqueezed_db: float
    v_p: float
    v_c: float
    electronic_floor_db: float | None = None
    label: str = ""

    def __post_init__(self) -> None:
        for name in ("probe_db", "conjugate_db", "squeezed_db", "antisqueezed_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        for name in ("v_p", "v_c"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class EstimateResult:
    """Inverted parameters for one point, or the reason there are none."""

    feasible: bool
    gain: float | None
    eta_p: float | None
    eta_c: float | None
    diagnostics: tuple[str, ...]
    antisqueezed_predicted_db: float | None = None
    antisqueezed_residual_db: float | None = None
    label: str = ""


@dataclass(frozen=True)
class EstimateSummary:
    """Mean and sample scatter of the feasible per-point estimates."""

    n_points: int
    n_feasible: int
    n_infeasible: int
    gain_mean: float
    gain_std: float
    eta_p_mean: float
    eta_p_std: float
    eta_c_mean: float
    eta_c_std: float


def _infeasible(reason: str, label: str) -> EstimateResult:
    return EstimateResult(False, None, None, None, (reason,), label=label)


def invert_point(point: MeasurementPoint, eps_p: float, eps_c: float) -> EstimateResult:
    """Closed-form inversion of one measurement point.

    ``eps_p``/``eps_c`` are the assumed thermal fractions of the
    mode-mismatched light on each detector.
    """
    for name, value in (("eps_p", eps_p), ("eps_c", eps_c)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {value}")

    n_probe = from_db(point.probe_db)
    n_conj = from_db(point.conjugate_db)
    n_sq = from_db(point.squeezed_db)

    if n_probe <= 1.0:
        return _infeasible("no excess noise on the probe beam", point.label)
    if n_conj <= 1.0:
        return _infeasible("no excess noise on the conjugate beam", point.label)

    if point.v_p == 0.0 or point.v_c == 0.0:
        return _infeasible(
            "zero visibility leaves no cross-correlation to fit", point.label
        )

    w_p = point.v_p**2 + eps_p * (1.0 - point.v_p**2)
    w_c = point.v_c**2 + eps_c * (1.0 - point.v_c**2)
    a = (n_probe - 1.0) / (2.0 * w_p)
    b = (n_conj - 1.0) / (2.0 * w_c)

    denom = 2.0 * point.v_p * point.v_c * math.sqrt(a * b)
    k = (1.0 + a * w_p + b * w_c - n_sq) / denom
    if k <= 1.0:
        return _infeasible(
            "squeezing exceeds model bound for given visibilities", point.label
        )

    gain = k * k / (k * k - 1.0)
    eta_p = a / (gain - 1.0)
    eta_c = b / (gain - 1.0)
    if eta_p > 1.0 + _ETA_SLACK or eta_c > 1.0 + _ETA_SLACK:
        return _infeasible("transmission above unity", point.label)

    # The prediction needs in-range parameters; the reported etas stay
    # exactly as computed (any excess is within _ETA_SLACK round-off).
    predicted = antisqueezed_noise(
        ModelParams(
            gain=gain,
            eta_p=min(eta_p, 1.0),
            eta_c=min(eta_c, 1.0),
            v_p=point.v_p,
            v_c=point.v_c,
            eps_p=eps_p,
            eps_c=eps_c,
        )
    )
    predicted_db = to_db(predicted)
    return EstimateResult(
        feasible=True,
        gain=gain,
        eta_p=eta_p,
        eta_c=eta_c,
        diagnostics=(),
        antisqueezed_predicted_db=predicted_db,
        antisqueezed_residual_db=predicted_db - point.antisqueezed_db,
        label=point.label,
    )


def _mean_std(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def aggregate(results: Sequence[EstimateResult]) -> EstimateSummary:
    """Mean and sample (n-1) standard deviation over the feasible points."""
    feasible = [r for r in results if r.feasible]
    if len(feasible) < 2:
        raise InsufficientDataError(
            f"need at least 2 feasible points for scatter statistics, "
            f"got {len(feasible)} of {len(results)}"
        )
    gain_mean, gain_std = _mean_std([r.gain for r in feasible])
    eta_p_mean, eta_p_std = _mean_std([r.eta_p for r in feasible])
    eta_c_mean, eta_c_std = _mean_std([r.eta_c for r in feasible])
    return EstimateSummary(
        n_points=len(results),
        n_feasible=len(feasible),
        n_infeasible=len(results) - len(feasible),
        gain_mean=gain_mean,
        gain_std=gain_std,
        eta_p_mean=eta_p_mean,
        eta_p_std=eta_p_std,
        eta_c_mean=eta_c_mean,
        eta_c_std=eta_c_std,
    )


def epsilon_scan(
    points: Sequence[MeasurementPoint],
    eps_grid: Sequence[float],
    eps_c: float = 1.0,
) -> list[tuple[float, EstimateSummary]]:
    """Re-estimate the whole data set at each probe thermal fraction.

    The conjugate fraction is held fixed (default 1).  A physically
    consistent ``eps_p`` shows up as the scan entry with the smallest
    parameter scatter, because only there do points taken at different
    visibilities agree on one operating point.
    """
    if len(eps_grid) == 0:
        raise ValueError("eps grid must not be empty")
    for value in eps_grid:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"eps grid values must lie in [0, 1], got {value}")

    table: list[tuple[float, EstimateSummary]] = []
    for eps_p in eps_grid:
        results = [invert_point(p, eps_p, eps_c) for p in points]
        table.append((eps_p, aggregate(results)))
    return table
