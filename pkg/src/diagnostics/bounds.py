"""
Closed-form blow-up bounds and related estimates.

All bounds return the value together with a validity flag; a violated
parameter hypothesis (non-positive beta, k or initial functional) raises
HypothesisError instead of returning a number.
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from lattice import HypothesisError, LatticeState, norm_p
from models import DCGLParams

from .functionals import sobolev_norm_sq

logger = logging.getLogger(__name__)

IMAG_BETA = "imag-beta"
REAL_K = "real-k"
BOUND_CASES = (IMAG_BETA, REAL_K)


class BoundEstimate(NamedTuple):
    t_star: Optional[float]
    valid: bool


@dataclass(frozen=True)
class BoundInput:
    """
    Inputs of the blow-up bounds.

    ``m0`` is M(0) for the imaginary case, N(0) for the real case, or the
    L^{-sigma} mass for the gauge DRGL bound.
    """

    params: DCGLParams
    p: float
    sigma: float
    L: int
    m0: float

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"p must exceed 1, got {self.p}")
        if self.L < 1:
            raise ValueError(f"L must be positive, got {self.L}")
        if not self.m0 > 0:
            raise HypothesisError(f"Initial functional must be positive, got {self.m0}", term="M0")

    @property
    def size_factor(self) -> float:
        """L^{-(1-p)(1-sigma)}."""
        return float(self.L) ** (-(1.0 - self.p) * (1.0 - self.sigma))


def _growth_coefficient(inp: BoundInput, case: str) -> float:
    if case not in BOUND_CASES:
        raise ValueError(f"Unknown bound case {case!r}; expected one of {BOUND_CASES}")
    name, value = ("beta", inp.params.beta) if case == IMAG_BETA else ("k", inp.params.k)
    if not value > 0:
        raise HypothesisError(f"Non-gauge blow-up bound ({case}) needs {name} > 0, got {value}", term=name)
    return value


def bound_nongauge(inp: BoundInput, case: str = IMAG_BETA) -> BoundEstimate:
    """
    Upper bound T* on the existence time for the non-gauge nonlinearity.

    With c = beta (imag-beta) or k (real-k) and s = (gamma/c) M0^{1-p} L^{-(1-p)(1-sigma)}:
        gamma != 0: T* = ln(1 + s) / ((p-1) gamma), valid when s > -1
        gamma == 0: T* = M0^{1-p} L^{-(1-p)(1-sigma)} / ((p-1) c)

    Args:
        inp: Parameters, p, sigma, L and M0 (or N0)
        case: imag-beta or real-k

    Returns:
        BoundEstimate(t_star, valid); t_star is None when invalid

    Raises:
        HypothesisError: beta <= 0 (resp. k <= 0)
    """
    coeff = _growth_coefficient(inp, case)
    p, gamma = inp.p, inp.params.gamma
    base = inp.m0 ** (1.0 - p) * inp.size_factor

    if gamma == 0:
        return BoundEstimate(base / ((p - 1.0) * coeff), True)

    s = (gamma / coeff) * base
    if not s > -1.0:
        logger.debug(f"bound_nongauge invalid: (gamma/c) M0^(1-p) L^... = {s} <= -1")
        return BoundEstimate(None, False)
    return BoundEstimate(math.log1p(s) / ((p - 1.0) * gamma), True)


def dissipation_window(inp: BoundInput, case: str = IMAG_BETA) -> Tuple[float, float]:
    """
    Range (0, upper) of damping -gamma for which bound_nongauge stays valid.

    upper = c L^{(1-p)(1-sigma)} / M0^{1-p} with c = beta or k.
    """
    coeff = _growth_coefficient(inp, case)
    return 0.0, coeff / (inp.size_factor * inp.m0 ** (1.0 - inp.p))


def bound_gauge_drgl(inp: BoundInput, k: Optional[float] = None, M0: Optional[float] = None) -> float:
    """
    Upper bound on the existence time of the gauge DRGL equation.

    T* <= ((p+1) / (k (p-1)^2)) L^{-(1-p)(1-sigma)} / M0^{(p-1)/2}, where M0 is
    the L^{-sigma} mass of the initial datum. The caller must have checked that
    the initial energy is nonpositive.

    Raises:
        HypothesisError: k <= 0 or M0 <= 0
    """
    k = inp.params.k if k is None else k
    M0 = inp.m0 if M0 is None else M0
    if not k > 0:
        raise HypothesisError(f"Gauge DRGL bound needs k > 0, got {k}", term="k")
    if not M0 > 0:
        raise HypothesisError(f"Gauge DRGL bound needs M0 > 0, got {M0}", term="M0")
    p = inp.p
    return (p + 1.0) / (k * (p - 1.0) ** 2) * inp.size_factor / M0 ** ((p - 1.0) / 2.0)


def dnls_sobolev_bound(state0: LatticeState, alpha: float, beta: float, p: float) -> float:
    """
    A-priori bound on ||u(t)||^2_{l^2_1} along gauge DNLS trajectories.

    ||u(t)||^2_{l^2_1} <= ||u0||^2_{l^2_1} + 4 beta / (alpha (p+1)) ||u0||^(p+1)_{l^2}
    """
    if not alpha > 0:
        raise HypothesisError(f"DNLS a-priori bound needs alpha > 0, got {alpha}", term="alpha")
    return sobolev_norm_sq(state0) + 4.0 * beta / (alpha * (p + 1.0)) * norm_p(state0, 2) ** (p + 1.0)
