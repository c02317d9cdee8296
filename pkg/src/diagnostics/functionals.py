"""
Scalar functionals of lattice states: blow-up functionals, energies and
conserved quantities.

sigma is always supplied by the caller; it ties the L^-sigma normalization to
the spatial scaling of the initial data.
"""

import math
from typing import Sequence

import numpy as np

from lattice import LatticeState, NonFiniteInputError
from models import forward_difference


def _finite(state: LatticeState) -> np.ndarray:
    if not state.is_finite:
        raise NonFiniteInputError(f"Functional evaluated on a non-finite state at t={state.time}")
    return state.amplitudes


def _scale(state: LatticeState, sigma: float) -> float:
    return float(state.geometry.L) ** (-sigma)


def m_imag(state: LatticeState, gamma: float, sigma: float) -> float:
    """M(t) = e^{-gamma t} L^{-sigma} Im sum u_n, evaluated at state.time."""
    return math.exp(-gamma * state.time) * _scale(state, sigma) * float(np.sum(_finite(state).imag))


def n_real(state: LatticeState, gamma: float, sigma: float) -> float:
    """N(t) = e^{-gamma t} L^{-sigma} Re sum u_n, evaluated at state.time."""
    return math.exp(-gamma * state.time) * _scale(state, sigma) * float(np.sum(_finite(state).real))


def mass_sigma(state: LatticeState, sigma: float) -> float:
    """L^{-sigma} sum |u_n|^2."""
    return _scale(state, sigma) * charge(state)


def charge(state: LatticeState) -> float:
    """sum |u_n|^2."""
    return float(np.sum(np.abs(_finite(state)) ** 2))


def gradient_sum(state: LatticeState) -> float:
    """sum |(B_d u)_n|^2, the ghost at n = N + 1 being zero."""
    _finite(state)
    return float(np.sum(np.abs(forward_difference(state).amplitudes) ** 2))


def power_sum(state: LatticeState, q: float) -> float:
    """sum |u_n|^q."""
    return float(np.sum(np.abs(_finite(state)) ** q))


def sobolev_norm_sq(state: LatticeState, xi: float = 1.0) -> float:
    """Discrete l^2_xi norm squared: xi sum |(B_d u)_n|^2 + sum |u_n|^2."""
    return xi * gradient_sum(state) + charge(state)


def energy_drgl(state: LatticeState, lambda_: float, gamma: float, k: float, p: float, sigma: float) -> float:
    """
    DRGL energy.

    E(u) = L^{-sigma} [ (lambda/2) sum |B_d u|^2 - (gamma/2) sum |u|^2 - (k/(p+1)) sum |u|^(p+1) ]
    """
    bracket = (
        0.5 * lambda_ * gradient_sum(state)
        - 0.5 * gamma * charge(state)
        - k / (p + 1.0) * power_sum(state, p + 1.0)
    )
    return _scale(state, sigma) * bracket


def hamiltonian_dnls(state: LatticeState, alpha: float, beta: float, p: float) -> float:
    """DNLS Hamiltonian (alpha/2) sum |B_d u|^2 - (beta/(p+1)) sum |u|^(p+1)."""
    return 0.5 * alpha * gradient_sum(state) - beta / (p + 1.0) * power_sum(state, p + 1.0)


def modified_energy_dnls(state: LatticeState, alpha: float, beta: float, p: float) -> float:
    """E_1(u) = (alpha/2) ||u||^2_{l^2_1} - (beta/(p+1)) ||u||^(p+1)_{l^(p+1)}."""
    return 0.5 * alpha * sobolev_norm_sq(state) - beta / (p + 1.0) * power_sum(state, p + 1.0)


def is_monotone(values: Sequence[float], increasing: bool = True, tol: float = 0.0) -> bool:
    """
    Whether consecutive samples never move against the given direction by more than tol.

    Args:
        values: Samples in time order
        increasing: True for nondecreasing, False for nonincreasing
        tol: Allowed backward step between neighbours

    Returns:
        True if monotone within tolerance
    """
    steps = np.diff(np.asarray(values, dtype=float))
    if not increasing:
        steps = -steps
    return bool(np.all(steps >= -tol))
