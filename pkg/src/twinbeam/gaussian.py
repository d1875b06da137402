"""Covariance-matrix engine for multimode Gaussian optical fields.

A state is a mean vector plus a symmetric covariance matrix over the
quadratures (X1, P1, X2, P2, ...), normalized so that every vacuum
quadrature has variance 1.  Physical states satisfy
``cov + i*Omega >= 0`` with ``Omega = symplectic_form(n_modes)``.

All transformations act at the covariance level and are pure functions:
they return a new state and never mutate their input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GaussianState",
    "ModeLabel",
    "symplectic_form",
    "vacuum",
    "apply_two_mode_squeeze",
    "apply_loss",
    "apply_visibility_mixer",
    "quadrature_variance",
    "joint_quadrature_variance",
]

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class ModeLabel:
    """A named mode position inside a multimode state."""

    name: str
    index: int


@dataclass
class GaussianState:
    """An n-mode Gaussian state: length-2n mean and 2n x 2n covariance."""

    n_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError("state needs at least one mode")
        dim = 2 * self.n_modes
        self.mean = np.asarray(self.mean, dtype=float)
        self.cov = np.asarray(self.cov, dtype=float)
        if self.mean.shape != (dim,):
            raise ValueError(f"mean must have shape ({dim},), got {self.mean.shape}")
        if self.cov.shape != (dim, dim):
            raise ValueError(f"cov must have shape ({dim}, {dim}), got {self.cov.shape}")
        if not np.allclose(self.cov, self.cov.T, rtol=_SYMMETRY_TOL, atol=_SYMMETRY_TOL):
            raise ValueError("covariance matrix must be symmetric")

    def copy(self) -> GaussianState:
        return GaussianState(self.n_modes, self.mean.copy(), self.cov.copy())


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for the (X1, P1, X2, P2, ...) ordering."""
    if n_modes < 1:
        raise ValueError("number of modes must be >= 1")
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), block)


def vacuum(n_modes: int) -> GaussianState:
    """The n-mode vacuum: zero mean, identity covariance."""
    if n_modes < 1:
        raise ValueError("number of modes must be >= 1")
    dim = 2 * n_modes
    return GaussianState(n_modes, np.zeros(dim), np.eye(dim))


def _check_mode(state: GaussianState, mode: int) -> None:
    if not 0 <= mode < state.n_modes:
        raise ValueError(f"mode index {mode} out of range for {state.n_modes}-mode state")


def _symmetrize(cov: np.ndarray) -> np.ndarray:
    # Round-off can leave the product S @ cov @ S.T asymmetric at the
    # 1e-16 level; average with the transpose so it never accumulates.
    return 0.5 * (cov + cov.T)


def apply_two_mode_squeeze(
    state: GaussianState, mode_a: int, mode_b: int, gain: float
) -> GaussianState:
    """Two-mode squeezer with intensity gain ``gain`` on a pair of modes.

    Acts as ``a -> sqrt(G) a + sqrt(G-1) b_dagger`` and symmetrically on
    ``b``, which on quadratures reads

        X_a -> sqrt(G) X_a + sqrt(G-1) X_b
        P_a -> sqrt(G) P_a - sqrt(G-1) P_b

    so the X quadratures correlate and the P quadratures anticorrelate.
    ``gain = 1`` is the identity.
    """
    _check_mode(state, mode_a)
    _check_mode(state, mode_b)
    if mode_a == mode_b:
        raise ValueError("two-mode squeezer needs two distinct modes")
    if gain < 1.0:
        raise ValueError(f"gain must be >= 1, got {gain}")

    c = math.sqrt(gain)
    s = math.sqrt(gain - 1.0)
    dim = 2 * state.n_modes
    xa, pa = 2 * mode_a, 2 * mode_a + 1
    xb, pb = 2 * mode_b, 2 * mode_b + 1

    smat = np.eye(dim)
    smat[xa, xa] = c
    smat[xa, xb] = s
    smat[pa, pa] = c
    smat[pa, pb] = -s
    smat[xb, xb] = c
    smat[xb, xa] = s
    smat[pb, pb] = c
    smat[pb, pa] = -s

    cov = _symmetrize(smat @ state.cov @ smat.T)
    mean = smat @ state.mean
    return GaussianState(state.n_modes, mean, cov)


def _mix_with_uncorrelated_ancilla(
    state: GaussianState, mode: int, transmittance: float, ancilla_variance: float
) -> GaussianState:
    # Beam splitter against an unobserved ancilla that carries no
    # correlations: the mode's covariance block relaxes toward the
    # ancilla variance while every cross-covariance scales with the
    # field amplitude sqrt(t).
    t = transmittance
    amp = math.sqrt(t)
    cov = state.cov.copy()
    mean = state.mean.copy()
    sl = slice(2 * mode, 2 * mode + 2)

    block = cov[sl, sl].copy()
    cov[sl, :] *= amp
    cov[:, sl] *= amp
    cov[sl, sl] = t * block + (1.0 - t) * ancilla_variance * np.eye(2)
    mean[sl] *= amp
    return GaussianState(state.n_modes, mean, _symmetrize(cov))


def apply_loss(state: GaussianState, mode: int, transmittance: float) -> GaussianState:
    """Pure loss on one mode: beam splitter of intensity transmittance
    ``transmittance`` against vacuum, ancilla traced out.

    ``transmittance = 1`` leaves the state untouched; ``0`` replaces the
    mode with vacuum.  Two losses compose as the product of their
    transmittances.
    """
    _check_mode(state, mode)
    if not 0.0 <= transmittance <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {transmittance}")
    return _mix_with_uncorrelated_ancilla(state, mode, transmittance, 1.0)


def apply_visibility_mixer(
    state: GaussianState,
    mode: int,
    visibility: float,
    thermal_fraction: float,
    ancilla_variance: float = 1.0,
) -> GaussianState:
    """Imperfect interference contrast modeled as a beam splitter of
    intensity transmittance ``visibility**2`` against an uncorrelated
    ancilla.

    The ancilla interpolates between vacuum and an independent thermal
    field of variance ``ancilla_variance``: its effective variance is
    ``1 + thermal_fraction * (ancilla_variance - 1)``.  With
    ``thermal_fraction = 0`` this reduces exactly to ``apply_loss`` with
    transmittance ``visibility**2``; with ``thermal_fraction = 1`` the
    mismatched light is as noisy as the signal it displaces.
    """
    _check_mode(state, mode)
    if not 0.0 <= visibility <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {visibility}")
    if not 0.0 <= thermal_fraction <= 1.0:
        raise ValueError(f"thermal fraction must lie in [0, 1], got {thermal_fraction}")
    if ancilla_variance < 1.0:
        raise ValueError(f"ancilla variance must be >= 1, got {ancilla_variance}")
    effective = 1.0 + thermal_fraction * (ancilla_variance - 1.0)
    return _mix_with_uncorrelated_ancilla(state, mode, visibility**2, effective)


def quadrature_variance(state: GaussianState, mode: int, phase: float) -> float:
    """Variance of the rotated quadrature X*cos(phase) + P*sin(phase)."""
    _check_mode(state, mode)
    x, p = 2 * mode, 2 * mode + 1
    c, s = math.cos(phase), math.sin(phase)
    cov = state.cov
    return float(c * c * cov[x, x] + s * s * cov[p, p] + 2.0 * c * s * cov[x, p])


def joint_quadrature_variance(
    state: GaussianState,
    mode_a: int,
    phase_a: float,
    mode_b: int,
    phase_b: float,
    sign: int,
) -> float:
    """Variance of the normalized joint quadrature
    ``(Q_a(phase_a) + sign * Q_b(phase_b)) / sqrt(2)``.

    ``sign = -1`` selects the difference quadrature, which for X-phases
    on a two-mode squeezed pair is the squeezed combination; ``+1`` the
    anti-squeezed sum.  Two uncorrelated vacua give 1 for either sign.
    """
    _check_mode(state, mode_a)
    _check_mode(state, mode_b)
    if sign not in (-1, 1):
        raise ValueError(f"sign must be -1 or +1, got {sign}")
    if mode_a == mode_b:
        raise ValueError("joint quadrature needs two distinct modes")

    ca, sa = math.cos(phase_a), math.sin(phase_a)
    cb, sb = math.cos(phase_b), math.sin(phase_b)
    xa, pa = 2 * mode_a, 2 * mode_a + 1
    xb, pb = 2 * mode_b, 2 * mode_b + 1
    cov = state.cov

    var_a = quadrature_variance(state, mode_a, phase_a)
    var_b = quadrature_variance(state, mode_b, phase_b)
    cross = (
        ca * cb * cov[xa, xb]
        + ca * sb * cov[xa, pb]
        + sa * cb * cov[pa, xb]
        + sa * sb * cov[pa, pb]
    )
    return float(0.5 * (var_a + var_b + 2.0 * sign * cross))
