"""
Absorbing-ball data for the dissipative regimes.

Finite lattice (k < 0): radii and a data-independent entry time from the
Gronwall bound ||u(t)||^2 <= rho_limit + (2 / (k1 p t))^(1/p).
Weighted lattice: the dissipation rate sigma0 for an admissible weight, the ball
radius rho^2 = ||g||^2_theta / (2 sigma0 epsilon), entry and tail times.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from lattice import HypothesisError, InvalidRadiusError, LatticeState, Weight
from models import DCGLParams, GeneralParams

logger = logging.getLogger(__name__)

FINITE = "finite"
WEIGHTED = "weighted"


@dataclass
class AttractorReport:
    mode: str
    p: Optional[float] = None
    k1: Optional[float] = None
    rho0: Optional[float] = None
    rho_limit: Optional[float] = None
    rho1: Optional[float] = None
    t0: Optional[float] = None
    lambda1_star: Optional[float] = None
    trivial_dynamics: Optional[bool] = None
    sigma0: Optional[float] = None
    epsilon: Optional[float] = None
    rho_sq: Optional[float] = None
    entry_time: Optional[float] = None
    R: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def lambda1_star(N: int) -> float:
    """Smallest eigenvalue of -A_d on 2N+1 Dirichlet sites: 2 (1 - cos(pi / (2N + 2)))."""
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}")
    # 2(1 - cos x) = 4 sin^2(x/2) avoids cancellation for large N
    return 4.0 * math.sin(math.pi / (4.0 * (N + 1))) ** 2


def finite_radii(params: DCGLParams, p: float, N: int) -> Tuple[float, float, float]:
    """
    (k1, rho0, rho_limit) of the finite dissipative lattice (k = -m < 0).

    k1 = m L^{(1-p)/2}
    rho0 = ((p-1)/(p+1)) (2/(k1 (p+1)))^{1/(p-1)} gamma^{(p+1)/(p-1)}  (0 when gamma <= 0)
    rho_limit = (2 rho0 / k1)^{1/(p+1)}

    Raises:
        HypothesisError: k >= 0 or lambda <= 0
    """
    if not params.k < 0:
        raise HypothesisError(f"Finite absorbing ball needs k < 0, got k={params.k}", term="k")
    if not params.lambda_ > 0:
        raise HypothesisError(f"Finite absorbing ball needs lambda > 0, got {params.lambda_}", term="lambda")
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")

    m = -params.k
    L = 2 * N + 1
    gamma = params.gamma
    k1 = m * float(L) ** ((1.0 - p) / 2.0)
    if gamma > 0:
        rho0 = ((p - 1.0) / (p + 1.0)) * (2.0 / (k1 * (p + 1.0))) ** (1.0 / (p - 1.0)) \
            * gamma ** ((p + 1.0) / (p - 1.0))
    else:
        rho0 = 0.0
    rho_limit = (2.0 * rho0 / k1) ** (1.0 / (p + 1.0))
    return k1, rho0, rho_limit


def default_finite_rho1(rho_limit: float, factor: float = 1.1) -> float:
    """factor * max(rho_limit, sqrt(rho_limit)), or factor itself when rho_limit = 0."""
    base = max(rho_limit, math.sqrt(rho_limit))
    return factor * base if base > 0 else factor


def absorbing_finite(params: DCGLParams, p: float, N: int, rho1: float) -> AttractorReport:
    """
    Absorbing ball of the finite dissipative lattice (k = -m < 0).

    Radii from finite_radii; every trajectory lies in the l^2 ball of radius
    rho1 from t0 = (2 / (k1 p)) (rho1^2 - rho_limit)^{-p} on.

    Raises:
        HypothesisError: k >= 0 or lambda <= 0
        InvalidRadiusError: rho1 <= rho_limit or rho1^2 <= rho_limit
    """
    k1, rho0, rho_limit = finite_radii(params, p, N)
    gamma = params.gamma
    notes: List[str] = []
    if gamma <= 0:
        notes.append("gamma <= 0: linear term already dissipative, rho0 set to 0")

    if not (rho1 > rho_limit and rho1 ** 2 > rho_limit):
        raise InvalidRadiusError(f"rho1={rho1} must exceed rho_limit={rho_limit} (and rho1^2 > rho_limit)")

    t0 = (2.0 / (k1 * p)) * (rho1 ** 2 - rho_limit) ** (-p)
    l1 = lambda1_star(N)
    trivial = gamma / params.lambda_ < l1
    if trivial:
        notes.append(f"gamma/lambda = {gamma / params.lambda_:.6g} < lambda1* = {l1:.6g}: trivial dynamics")

    return AttractorReport(
        mode=FINITE,
        p=p,
        k1=k1,
        rho0=rho0,
        rho_limit=rho_limit,
        rho1=rho1,
        t0=t0,
        lambda1_star=l1,
        trivial_dynamics=trivial,
        notes=notes,
    )


def finite_envelope(report: AttractorReport, t: float) -> float:
    """Data-independent bound rho_limit + (2 / (k1 p t))^{1/p} on ||u(t)||^2, t > 0."""
    if not t > 0:
        raise ValueError(f"Envelope needs t > 0, got {t}")
    if report.mode != FINITE:
        raise ValueError("finite_envelope needs a finite-mode report")
    p = report.p
    return report.rho_limit + (2.0 / (report.k1 * p * t)) ** (1.0 / p)


def sigma0(params: GeneralParams, w: Weight, epsilon: float) -> float:
    """
    Weighted dissipation rate.

    sigma0 = delta_hat - epsilon/2 - 2 beta_hat - |alpha_hat| D d_lower^{-1/2}
             - |beta_hat| (1 + d_upper/2 + d_lower^{-1}/2)
    The regime is dissipative when sigma0 > 0 and zeta_hat > 0.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return (
        params.delta_hat
        - epsilon / 2.0
        - 2.0 * params.beta_hat
        - abs(params.alpha_hat) * w.D * w.d_lower ** -0.5
        - abs(params.beta_hat) * (1.0 + w.d_upper / 2.0 + 0.5 / w.d_lower)
    )


def dcgl_exponential_margin(params: DCGLParams, mu: float) -> float:
    """
    sigma0 of the DCGL image under the weight exp(mu |n|) with epsilon = 2 lambda.

    Equals -gamma - lambda e^mu - 2 |alpha| e^mu sinh(mu/2).
    """
    return -params.gamma - params.lambda_ * math.exp(mu) - 2.0 * abs(params.alpha) * math.exp(mu) * math.sinh(mu / 2.0)


def exponential_condition_holds(params: DCGLParams, mu: float) -> bool:
    """The simplified DCGL condition -gamma > lambda e^mu + 2 |alpha| sinh(mu/2)."""
    return -params.gamma > params.lambda_ * math.exp(mu) + 2.0 * abs(params.alpha) * math.sinh(mu / 2.0)


def absorbing_weighted(
    g_norm_sq: float,
    sigma0: float,
    epsilon: float,
    R: float,
    rho1: float,
) -> AttractorReport:
    """
    Absorbing ball in the weighted space.

    Args:
        g_norm_sq: ||g||^2_theta of the forcing
        sigma0: Dissipation rate, must be positive
        epsilon: Young-inequality parameter used in sigma0
        R: Radius of the bounded set of initial data
        rho1: Requested absorbing radius, rho1^2 > rho^2

    Returns:
        Report with rho^2 = g_norm_sq / (2 sigma0 epsilon) and entry time
        t0 = ln(R^2 / (rho1^2 - rho^2)) / (2 sigma0), zero if R already lies inside

    Raises:
        HypothesisError: sigma0 <= 0
        InvalidRadiusError: rho1^2 <= rho^2
    """
    if not sigma0 > 0:
        raise HypothesisError(f"Weighted absorbing ball needs sigma0 > 0, got {sigma0}", term="sigma0")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    rho_sq = g_norm_sq / (2.0 * sigma0 * epsilon)
    if not rho1 ** 2 > rho_sq:
        raise InvalidRadiusError(f"rho1^2={rho1 ** 2} must exceed rho^2={rho_sq}")
    entry = max(0.0, math.log(R ** 2 / (rho1 ** 2 - rho_sq)) / (2.0 * sigma0)) if R > 0 else 0.0
    notes = []
    if g_norm_sq == 0:
        notes.append("no forcing: rho = 0, exponential decay at rate 2 sigma0")
    return AttractorReport(
        mode=WEIGHTED,
        rho1=rho1,
        sigma0=sigma0,
        epsilon=epsilon,
        rho_sq=rho_sq,
        entry_time=entry,
        t0=entry,
        R=R,
        notes=notes,
    )


def weighted_envelope(R: float, sigma0: float, rho_sq: float, t: float) -> float:
    """Gronwall bound R^2 e^{-2 sigma0 t} + rho^2 (1 - e^{-2 sigma0 t}) on ||u(t)||^2_theta."""
    decay = math.exp(-2.0 * sigma0 * t)
    return R ** 2 * decay + rho_sq * (1.0 - decay)


def tail_entry_time(t0: float, sigma0: float, rho1: float, eta: float) -> float:
    """T(eta) = t0 + ln(2 sigma0 rho1^2 / eta) / (2 sigma0), after which tails stay below eta / sigma0."""
    if not (sigma0 > 0 and eta > 0):
        raise ValueError(f"tail_entry_time needs sigma0 > 0 and eta > 0, got {sigma0}, {eta}")
    return t0 + math.log(2.0 * sigma0 * rho1 ** 2 / eta) / (2.0 * sigma0)


def tail_mass(state: LatticeState, w: Weight, M: int) -> float:
    """
    Weighted mass outside the window: sum over |n| > 2M of theta_n |u_n|^2.

    Returns 0 with a warning when 2M >= N.
    """
    N = state.geometry.N
    if 2 * M >= N:
        logger.warning(f"tail_mass: window 2M={2 * M} reaches the lattice edge N={N}; returning 0")
        return 0.0
    sites = state.geometry.sites()
    outside = np.abs(sites) > 2 * M
    theta = w.values(sites[outside])
    return float(np.sum(theta * np.abs(state.amplitudes[outside]) ** 2))
