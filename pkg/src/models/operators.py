"""Discrete difference operators A_d and B_d with zero Dirichlet ghosts."""

import numpy as np

from lattice import LatticeState

from .kernels import first_difference, second_difference


def _amplitudes(state: LatticeState) -> np.ndarray:
    return np.array(state.amplitudes, dtype=np.complex128)


def discrete_laplacian(state: LatticeState) -> LatticeState:
    """(A_d u)_n = u_{n-1} - 2 u_n + u_{n+1}."""
    return state.with_amplitudes(second_difference(_amplitudes(state)), blown_up=state.blown_up)


def forward_difference(state: LatticeState) -> LatticeState:
    """(B_d u)_n = u_{n+1} - u_n, so the last entry is -u_N."""
    return state.with_amplitudes(first_difference(_amplitudes(state)), blown_up=state.blown_up)
