"""Closed-form noise model for twin-beam homodyne measurements.

The four observables -- probe and conjugate single-beam quadrature
noises plus the squeezed and anti-squeezed joint quadrature noises --
are written directly in terms of the intensity gain ``gain``, the
effective intensity transmittances ``eta_p``/``eta_c``, the homodyne
visibilities ``v_p``/``v_c``, and the thermal fractions
``eps_p``/``eps_c`` describing how noisy the mode-mismatched light is
(0 = vacuum, 1 = as noisy as the signal beam).

Everything is in shot-noise units: a vacuum quadrature has variance 1,
and decibel values are ``10*log10`` of that ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ModelParams",
    "NoiseQuartet",
    "visibility",
    "gain_from_dc",
    "probe_noise",
    "conjugate_noise",
    "squeezed_noise",
    "antisqueezed_noise",
    "noise_quartet",
    "to_db",
    "from_db",
]


@dataclass(frozen=True)
class ModelParams:
    """Operating point of the twin-beam source and detection chain.

    Parameters
    ----------
    gain:
        Intensity gain of the two-mode squeezer, >= 1.
    eta_p, eta_c:
        Effective intensity transmittances of the probe and conjugate
        paths (source through detector), in (0, 1].
    v_p, v_c:
        Homodyne fringe visibilities of the two detectors, in [0, 1].
    eps_p, eps_c:
        Thermal fractions of the mode-mismatched light coupled in by
        imperfect visibility, in [0, 1].
    """

    gain: float
    eta_p: float = 1.0
    eta_c: float = 1.0
    v_p: float = 1.0
    v_c: float = 1.0
    eps_p: float = 0.0
    eps_c: float = 0.0

    def __post_init__(self) -> None:
        if self.gain < 1.0:
            raise ValueError(f"gain must be >= 1, got {self.gain}")
        for name in ("eta_p", "eta_c"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {value}")
        for name in ("v_p", "v_c", "eps_p", "eps_c"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class NoiseQuartet:
    """The four noise observables of one operating point, linear units."""

    probe: float
    conjugate: float
    squeezed: float
    antisqueezed: float

    def __post_init__(self) -> None:
        for name in ("probe", "conjugate", "squeezed", "antisqueezed"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} noise must be positive")
        if self.squeezed > self.antisqueezed:
            raise ValueError("squeezed noise cannot exceed anti-squeezed noise")


def visibility(max_power: float, min_power: float) -> float:
    """Fringe visibility (max - min) / (max + min) from DC interference powers."""
    if max_power <= 0.0:
        raise ValueError("maximum fringe power must be positive")
    if min_power < 0.0:
        raise ValueError("minimum fringe power cannot be negative")
    if min_power > max_power:
        raise ValueError("minimum fringe power cannot exceed the maximum")
    return (max_power - min_power) / (max_power + min_power)


def gain_from_dc(p_conjugate: float, p_seed: float) -> float:
    """Intensity gain from DC powers: the generated conjugate power is
    (gain - 1) times the transmitted seed power."""
    if p_seed <= 0.0:
        raise ValueError("seed power must be positive")
    if p_conjugate < 0.0:
        raise ValueError("conjugate power cannot be negative")
    return 1.0 + p_conjugate / p_seed


def _arm_noise(gain: float, eta: float, vis: float, eps: float) -> float:
    # Amplified single-beam noise 1 + 2*(gain-1)*eta, degraded by the
    # visibility mixer: the matched fraction v**2 passes through, the
    # mismatched remainder carries vacuum unless eps couples in thermal
    # light at the signal's own noise level.
    v2 = vis * vis
    return (1.0 + 2.0 * (gain - 1.0) * eta) * (eps * (1.0 - v2) + v2) + (1.0 - eps) * (
        1.0 - v2
    )


def probe_noise(params: ModelParams) -> float:
    """Quadrature noise of the probe beam alone, shot-noise units."""
    return _arm_noise(params.gain, params.eta_p, params.v_p, params.eps_p)


def conjugate_noise(params: ModelParams) -> float:
    """Quadrature noise of the conjugate beam alone, shot-noise units."""
    return _arm_noise(params.gain, params.eta_c, params.v_c, params.eps_c)


def _joint_noise(params: ModelParams, sign: float) -> float:
    g = params.gain
    vp2 = params.v_p * params.v_p
    vc2 = params.v_c * params.v_c
    shared = (
        1.0
        + (g - 1.0) * params.eta_p * (vp2 + params.eps_p * (1.0 - vp2))
        + (g - 1.0) * params.eta_c * (vc2 + params.eps_c * (1.0 - vc2))
    )
    cross = (
        2.0
        * math.sqrt(g * (g - 1.0))
        * params.v_p
        * params.v_c
        * math.sqrt(params.eta_p * params.eta_c)
    )
    return shared + sign * cross


def squeezed_noise(params: ModelParams) -> float:
    """Noise of the difference joint quadrature (the squeezed one)."""
    return _joint_noise(params, -1.0)


def antisqueezed_noise(params: ModelParams) -> float:
    """Noise of the sum joint quadrature (the anti-squeezed one)."""
    return _joint_noise(params, +1.0)


def noise_quartet(params: ModelParams) -> NoiseQuartet:
    """All four observables of one operating point."""
    return NoiseQuartet(
        probe=probe_noise(params),
        conjugate=conjugate_noise(params),
        squeezed=squeezed_noise(params),
        antisqueezed=antisqueezed_noise(params),
    )


def to_db(linear: float) -> float:
    """Linear noise ratio to decibels."""
    if linear <= 0.0:
        raise ValueError(f"linear value must be positive, got {linear}")
    return 10.0 * math.log10(linear)


def from_db(db: float) -> float:
    """Decibels to linear noise ratio."""
    return 10.0 ** (db / 10.0)
