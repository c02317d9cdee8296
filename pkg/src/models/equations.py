"""
Right-hand sides of the lattice equations and the local existence constants.

Two layers are provided: LatticeState-level functions for direct evaluation,
and ``make_rhs`` / ``make_general_rhs`` closures ``f(t, a) -> da/dt`` working on
raw amplitude arrays, which the integrator calls in its inner loop.
"""

import logging
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from lattice import DimensionError, LatticeState, UnsupportedNonlinearityError

from .kernels import second_difference
from .params import (
    GAUGE,
    GENERAL_F,
    NON_GAUGE,
    SIGN_CONVENTIONS,
    SOURCE,
    DCGLParams,
    GeneralParams,
    Nonlinearity,
)

logger = logging.getLogger(__name__)

Derivative = Callable[[float, np.ndarray], np.ndarray]


def nonlinear_profile(a: np.ndarray, nl: Nonlinearity) -> np.ndarray:
    """F(a) without its complex prefactor."""
    modulus = np.abs(a)
    if nl.kind == GAUGE:
        return modulus ** (nl.p - 1.0) * a
    if nl.kind == NON_GAUGE:
        return (modulus ** nl.p).astype(np.complex128)
    return np.asarray(nl.f(modulus ** 2)) * a


def _forcing_array(forcing: Optional[LatticeState], size: int) -> Optional[np.ndarray]:
    if forcing is None:
        return None
    if forcing.amplitudes.size != size:
        raise DimensionError(f"Forcing has {forcing.amplitudes.size} sites, state has {size}")
    return forcing.amplitudes


def _as_state(template: LatticeState, values: np.ndarray) -> LatticeState:
    """Wrap a derivative array, flagging it instead of raising when it is non-finite."""
    return template.with_amplitudes(values, blown_up=not bool(np.all(np.isfinite(values))))


def apply_nonlinearity(state: LatticeState, nl: Nonlinearity, coeff: complex = 1.0) -> LatticeState:
    """
    Componentwise coeff * F(u_n).

    Args:
        state: Lattice state
        nl: Nonlinearity kind and exponent
        coeff: Complex prefactor, e.g. k + i beta

    Returns:
        coeff |u_n|^(p-1) u_n (gauge), coeff |u_n|^p (non-gauge) or coeff f(|u_n|^2) u_n
    """
    with np.errstate(over="ignore", invalid="ignore"):
        values = coeff * nonlinear_profile(state.amplitudes, nl)
    return _as_state(state, values)


def make_general_rhs(params: GeneralParams, nl: Nonlinearity) -> Derivative:
    """Array-level du/dt = i[(a+ib) A u + (c+id) u + (e+iz) F(u) - g]."""
    coupling = complex(params.alpha_hat, params.beta_hat)
    linear = complex(params.gamma_hat, params.delta_hat)
    nonlinear = complex(params.eta_hat, params.zeta_hat)
    forcing = params.forcing.amplitudes if params.forcing is not None else None

    def rhs(t: float, a: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            inner = coupling * second_difference(a) + linear * a + nonlinear * nonlinear_profile(a, nl)
            if forcing is not None:
                inner = inner - forcing
            return 1j * inner

    return rhs


def make_rhs(
    params: DCGLParams,
    nl: Nonlinearity,
    convention: str = SOURCE,
) -> Derivative:
    """
    Array-level DCGL right-hand side.

    source: du/dt = (lambda + i alpha) A u + (k + i beta) F(u) + gamma u + f
    lhs:    du/dt = (lambda + i alpha) A u + gamma u - (k + i beta) F(u) + f
    """
    if convention not in SIGN_CONVENTIONS:
        raise ValueError(f"Unknown sign convention {convention!r}; expected one of {SIGN_CONVENTIONS}")
    coupling = params.coupling
    nonlinear = params.nonlinear_coefficient if convention == SOURCE else -params.nonlinear_coefficient
    gamma = params.gamma
    forcing = params.forcing.amplitudes if params.forcing is not None else None

    def rhs(t: float, a: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            out = coupling * second_difference(a) + gamma * a + nonlinear * nonlinear_profile(a, nl)
            if forcing is not None:
                out = out + forcing
            return out

    return rhs


def rhs_general(state: LatticeState, params: GeneralParams, nl: Nonlinearity) -> LatticeState:
    """Evaluate the six-parameter right-hand side at a state."""
    _forcing_array(params.forcing, state.geometry.L)
    values = make_general_rhs(params, nl)(state.time, np.array(state.amplitudes, dtype=np.complex128))
    return _as_state(state, values)


def rhs_dcgl(
    state: LatticeState,
    params: DCGLParams,
    nl: Nonlinearity,
    sign_convention: str = SOURCE,
) -> LatticeState:
    """Evaluate the DCGL right-hand side at a state in the given sign convention."""
    _forcing_array(params.forcing, state.geometry.L)
    values = make_rhs(params, nl, sign_convention)(state.time, np.array(state.amplitudes, dtype=np.complex128))
    return _as_state(state, values)


def dcgl_to_general(params: DCGLParams) -> GeneralParams:
    """
    Map DCGL parameters (nonlinearity on the left-hand side) to the general form.

    alpha_hat = alpha, beta_hat = -lambda, gamma_hat = 0, delta_hat = -gamma,
    eta_hat = -beta, zeta_hat = k, g = i f.
    """
    forcing = None
    if params.forcing is not None:
        forcing = params.forcing.with_amplitudes(1j * params.forcing.amplitudes)
    return GeneralParams(
        alpha_hat=params.alpha,
        beta_hat=-params.lambda_,
        gamma_hat=0.0,
        delta_hat=-params.gamma,
        eta_hat=-params.beta,
        zeta_hat=params.k,
        forcing=forcing,
    )


def _general_f_lipschitz(R: float, nl: Nonlinearity) -> float:
    """
    sup over r = |w|^2 in [0, R^2] of |f(r)| + 2 r |f'(r)|, the derivative bound
    of F(s) = f(|s|^2) s. The grid maximum is refined with a bounded scalar search.
    """
    if nl.f_prime is None:
        raise UnsupportedNonlinearityError("Lipschitz constant of a general-f nonlinearity needs f_prime")

    def slope(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return np.abs(np.asarray(nl.f(r), dtype=float)) + 2.0 * r * np.abs(np.asarray(nl.f_prime(r), dtype=float))

    grid = np.linspace(0.0, R * R, 257)
    values = slope(grid)
    i = int(np.argmax(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    refined = minimize_scalar(lambda r: -float(slope(np.array([r]))[0]), bounds=(lo, hi), method="bounded")
    return float(max(values[i], -refined.fun))


def lipschitz_constant(R: float, nl: Nonlinearity) -> float:
    """
    Local Lipschitz constant L(R) = 2 c R^(p-1) of F on the ball of radius R.

    For a general-f nonlinearity L(R) = sup_{r <= R^2} |f(r)| + 2 r |f'(r)|,
    evaluated numerically from ``f`` and ``f_prime``.

    Raises:
        UnsupportedNonlinearityError: general-f nonlinearity without f_prime
    """
    if not R > 0:
        raise ValueError(f"Radius must be positive, got {R}")
    if nl.kind == GENERAL_F:
        return _general_f_lipschitz(R, nl)
    return 2.0 * nl.c * R ** (nl.p - 1.0)


def local_existence_time(R: float, nl: Nonlinearity) -> float:
    """Guaranteed existence interval 1 / (2 (L(R) + 1)), with R = 2 ||u(t)||."""
    return 1.0 / (2.0 * (lipschitz_constant(R, nl) + 1.0))
