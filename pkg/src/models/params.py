"""
Parameter sets for the lattice equations and the nonlinearity description.

DCGLParams covers the DCGL, DRGL and DNLS presets
    du/dt = (lambda + i alpha) A_d u + gamma u +- (k + i beta) F(u) (+ f),
GeneralParams the six-real-parameter form
    du/dt = i[(a + i b) A_d u + (c + i d) u + (e + i z) F(u) - g].
"""

import math
from dataclasses import dataclass, field, fields
from typing import Callable, Optional

import numpy as np

from lattice import LatticeState

GAUGE = "gauge"
NON_GAUGE = "non-gauge"
GENERAL_F = "general-f"
NONLINEARITY_KINDS = (GAUGE, NON_GAUGE, GENERAL_F)

SOURCE = "source"
LHS = "lhs"
SIGN_CONVENTIONS = (SOURCE, LHS)


def _require_finite(obj):
    for item in fields(obj):
        value = getattr(obj, item.name)
        if isinstance(value, (int, float)) and not math.isfinite(value):
            raise ValueError(f"{type(obj).__name__}.{item.name} must be finite, got {value}")


@dataclass(frozen=True)
class GeneralParams:
    alpha_hat: float = 0.0
    beta_hat: float = 0.0
    gamma_hat: float = 0.0
    delta_hat: float = 0.0
    eta_hat: float = 0.0
    zeta_hat: float = 0.0
    forcing: Optional[LatticeState] = field(default=None, compare=False)

    def __post_init__(self):
        _require_finite(self)

    @property
    def coefficients(self):
        return (self.alpha_hat, self.beta_hat, self.gamma_hat, self.delta_hat, self.eta_hat, self.zeta_hat)


@dataclass(frozen=True)
class DCGLParams:
    """(lambda, alpha, k, beta, gamma) with lambda >= 0, plus an optional forcing f_n."""

    lambda_: float = 0.0
    alpha: float = 0.0
    k: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    forcing: Optional[LatticeState] = field(default=None, compare=False)

    def __post_init__(self):
        _require_finite(self)
        if self.lambda_ < 0:
            raise ValueError(f"lambda must be nonnegative, got {self.lambda_}")

    @property
    def coupling(self) -> complex:
        return complex(self.lambda_, self.alpha)

    @property
    def nonlinear_coefficient(self) -> complex:
        return complex(self.k, self.beta)


def drgl_params(lambda_: float, k: float, gamma: float = 0.0) -> DCGLParams:
    """Discrete real Ginzburg-Landau preset (alpha = beta = 0)."""
    return DCGLParams(lambda_=lambda_, k=k, gamma=gamma)


def dnls_params(alpha: float, beta: float) -> DCGLParams:
    """Discrete nonlinear Schrodinger preset (lambda = k = gamma = 0)."""
    return DCGLParams(alpha=alpha, beta=beta)


@dataclass(frozen=True)
class Nonlinearity:
    """
    Power nonlinearity of degree p.

    gauge:     F(s) = |s|^(p-1) s
    non-gauge: F(s) = |s|^p
    general-f: F(s) = f(|s|^2) s
    The complex prefactor (k + i beta, or eta_hat + i zeta_hat) comes from the
    parameter set. ``c`` is the constant of the local Lipschitz estimate.
    """

    kind: str = GAUGE
    p: float = 3.0
    c: float = 1.0
    f: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    f_prime: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in NONLINEARITY_KINDS:
            raise ValueError(f"Unknown nonlinearity kind {self.kind!r}; expected one of {NONLINEARITY_KINDS}")
        if not self.p > 1:
            raise ValueError(f"Nonlinearity exponent p must exceed 1, got {self.p}")
        if not self.c > 0:
            raise ValueError(f"Lipschitz constant c must be positive, got {self.c}")
        if self.kind == GENERAL_F and self.f is None:
            raise ValueError("general-f nonlinearity needs a function f")
