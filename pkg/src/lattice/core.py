"""
Lattice geometry, complex states, norms, weights and initial data.

Sites are indexed n = -N..N on a lattice of L = 2N + 1 sites. Dirichlet ghost
sites at n = +-(N + 1) are never stored; operators treat them as zeros.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import DimensionError, NonFiniteInputError, ParameterOrderError

logger = logging.getLogger(__name__)

FINITE_DIRICHLET = "finite-Dirichlet"
TRUNCATED_INFINITE = "truncated-infinite"
GEOMETRY_KINDS = (FINITE_DIRICHLET, TRUNCATED_INFINITE)

IMAGINARY_POSITIVE = "imaginary-positive"
REAL_POSITIVE = "real-positive"
RANDOM_PHASE = "random-phase"
LOCALIZED = "localized"
ZERO = "zero"
INITIAL_DATA_KINDS = (IMAGINARY_POSITIVE, REAL_POSITIVE, RANDOM_PHASE, LOCALIZED, ZERO)


@dataclass(frozen=True)
class LatticeGeometry:
    """Half-width N and boundary kind of a one-dimensional lattice."""

    N: int
    kind: str = FINITE_DIRICHLET

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 0:
            raise ValueError(f"N must be a nonnegative integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if self.kind not in GEOMETRY_KINDS:
            raise ValueError(f"Unknown geometry kind {self.kind!r}; expected one of {GEOMETRY_KINDS}")

    @property
    def L(self) -> int:
        return 2 * self.N + 1

    def sites(self) -> np.ndarray:
        """Site indices -N..N as an integer array."""
        return np.arange(-self.N, self.N + 1)

    def index(self, n: int) -> int:
        """Array position of site n."""
        if abs(n) > self.N:
            raise DimensionError(f"Site {n} outside lattice |n| <= {self.N}")
        return n + self.N


@dataclass(frozen=True, eq=False)
class LatticeState:
    """
    Complex amplitudes u_n at a given time.

    The amplitude array is copied on construction and made read-only, so a
    state can be shared between threads. Non-finite amplitudes are only
    allowed on states flagged ``blown_up``.
    """

    geometry: LatticeGeometry
    amplitudes: np.ndarray
    time: float = 0.0
    blown_up: bool = False

    def __post_init__(self):
        values = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if values.size != self.geometry.L:
            raise DimensionError(
                f"Expected {self.geometry.L} amplitudes for N={self.geometry.N}, got {values.size}"
            )
        if not self.blown_up and not np.all(np.isfinite(values)):
            raise NonFiniteInputError("Non-finite amplitude in a state not flagged as blown up")
        if self.time < 0 or not math.isfinite(self.time):
            raise ValueError(f"State time must be finite and nonnegative, got {self.time}")
        values.setflags(write=False)
        object.__setattr__(self, "amplitudes", values)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def zeros(cls, geometry: LatticeGeometry, time: float = 0.0) -> "LatticeState":
        return cls(geometry, np.zeros(geometry.L, dtype=np.complex128), time)

    @classmethod
    def from_values(cls, values, time: float = 0.0, kind: str = FINITE_DIRICHLET) -> "LatticeState":
        """Build a state from an odd-length sequence of amplitudes."""
        values = np.asarray(values, dtype=np.complex128).reshape(-1)
        if values.size % 2 == 0:
            raise DimensionError(f"A lattice has an odd number of sites, got {values.size}")
        return cls(LatticeGeometry((values.size - 1) // 2, kind), values, time)

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.amplitudes)))

    def with_amplitudes(self, amplitudes, time: Optional[float] = None, blown_up: bool = False) -> "LatticeState":
        return LatticeState(self.geometry, amplitudes, self.time if time is None else time, blown_up)

    def at(self, n: int) -> complex:
        """Amplitude at site n."""
        return complex(self.amplitudes[self.geometry.index(n)])


def _finite_amplitudes(state: LatticeState) -> np.ndarray:
    if not state.is_finite:
        raise NonFiniteInputError(f"State at t={state.time} has non-finite amplitudes")
    return state.amplitudes


def _check_same_geometry(u: LatticeState, v: LatticeState):
    if u.geometry != v.geometry:
        raise DimensionError(f"Geometry mismatch: N={u.geometry.N} vs N={v.geometry.N}")


def norm_p(state: LatticeState, p: float) -> float:
    """
    The l^p norm of the amplitudes.

    Args:
        state: Finite lattice state
        p: Exponent in [1, inf]; ``math.inf`` gives the sup-norm

    Returns:
        (sum |u_n|^p)^(1/p), or max |u_n| for p = inf

    Raises:
        NonFiniteInputError: if any amplitude is NaN or infinite
    """
    if not p >= 1:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    moduli = np.abs(_finite_amplitudes(state))
    if moduli.size == 0 or not moduli.any():
        return 0.0
    if math.isinf(p):
        return float(moduli.max())
    # scale by the maximum so |u|^p cannot overflow for large p
    top = moduli.max()
    return float(top * np.sum((moduli / top) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class Weight:
    """
    A weight theta_n with its growth constants D, d_lower and d_upper.

    ``theta`` maps an integer site array to positive values, so the weight
    can be evaluated lazily on any window of the infinite lattice.
    """

    theta: Callable[[np.ndarray], np.ndarray]
    D: float
    d_lower: float
    d_upper: float
    mu: Optional[float] = None

    @classmethod
    def exponential(cls, mu: float) -> "Weight":
        """theta_n = exp(mu |n|) with D = e^mu - 1, d_upper = e^mu, d_lower = e^-mu."""
        if mu < 0:
            raise ValueError(f"mu must be nonnegative, got {mu}")
        return cls(
            theta=lambda n: np.exp(mu * np.abs(np.asarray(n, dtype=float))),
            D=math.expm1(mu),
            d_lower=math.exp(-mu),
            d_upper=math.exp(mu),
            mu=mu,
        )

    @classmethod
    def from_table(cls, table, D: float, d_lower: float, d_upper: float) -> "Weight":
        """
        Tabulated weight on sites -M..M (table of odd length 2M + 1).

        The growth constants must be supplied; they are checked by
        validate_weight, never inferred.
        """
        values = np.asarray(table, dtype=float).reshape(-1)
        if values.size % 2 == 0:
            raise DimensionError(f"Weight table needs odd length, got {values.size}")
        half = (values.size - 1) // 2

        def theta(n):
            n = np.asarray(n)
            if np.any(np.abs(n) > half):
                raise DimensionError(f"Weight table covers |n| <= {half} only")
            return values[n + half]

        return cls(theta=theta, D=D, d_lower=d_lower, d_upper=d_upper)

    def values(self, n) -> np.ndarray:
        return np.asarray(self.theta(np.asarray(n)), dtype=float)

    def on(self, geometry: LatticeGeometry) -> np.ndarray:
        """theta_n on every site of the geometry."""
        return self.values(geometry.sites())


@dataclass(frozen=True)
class WeightViolation:
    condition: str
    site: int
    detail: str


@dataclass(frozen=True)
class WeightValidation:
    """Outcome of checking the weight conditions over a window of sites."""

    valid: bool
    n_range: Tuple[int, int]
    violations: List[WeightViolation] = field(default_factory=list)

    @property
    def first_violation(self) -> Optional[WeightViolation]:
        return self.violations[0] if self.violations else None

    def summary(self) -> str:
        if self.valid:
            return f"weight valid on [{self.n_range[0]}, {self.n_range[1]}]"
        first = self.first_violation
        return f"weight invalid: {first.condition} fails at n={first.site} ({first.detail})"


def validate_weight(w: Weight, n_range: Tuple[int, int], rtol: float = 1e-12) -> WeightValidation:
    """
    Check the weight conditions pointwise over ``n_range`` (inclusive).

    Conditions, in reporting order: positive constants, theta_n >= 1,
    |theta_{n+1} - theta_n| <= D theta_n and
    d_lower theta_n <= theta_{n+1} <= d_upper theta_n.
    Violations are collected per condition, first site only.
    """
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo > hi:
        raise ParameterOrderError(f"n_range lower end {lo} exceeds upper end {hi}")

    violations: List[WeightViolation] = []
    for name, value in (("D", w.D), ("d_lower", w.d_lower), ("d_upper", w.d_upper)):
        if not value > 0:
            violations.append(WeightViolation(f"{name} > 0", lo, f"{name} must be positive, got {value}"))

    sites = np.arange(lo, hi + 1)
    theta = w.values(sites)

    below_one = np.nonzero(theta < 1.0 - rtol)[0]
    if below_one.size:
        n = int(sites[below_one[0]])
        violations.append(WeightViolation("theta_n >= 1", n, f"theta_{n} = {theta[below_one[0]]}"))

    if sites.size > 1:
        current, following = theta[:-1], theta[1:]
        slack = rtol * np.maximum(current, 1.0)
        checks = (
            ("|theta_(n+1) - theta_n| <= D theta_n", np.abs(following - current) > w.D * current + slack),
            ("d_lower theta_n <= theta_(n+1)", w.d_lower * current > following + slack),
            ("theta_(n+1) <= d_upper theta_n", following > w.d_upper * current + slack),
        )
        for condition, failed in checks:
            bad = np.nonzero(failed)[0]
            if bad.size:
                n = int(sites[bad[0]])
                violations.append(
                    WeightViolation(condition, n, f"theta_{n} = {current[bad[0]]}, theta_{n + 1} = {following[bad[0]]}")
                )

    return WeightValidation(valid=not violations, n_range=(lo, hi), violations=violations)


def weighted_norm(state: LatticeState, w: Weight, p: float = 2.0) -> float:
    """(sum theta_n |u_n|^p)^(1/p) for p in [1, inf)."""
    if not 1 <= p < math.inf:
        raise ValueError(f"Weighted norms need p in [1, inf), got {p}")
    moduli = np.abs(_finite_amplitudes(state))
    return float(np.sum(w.on(state.geometry) * moduli ** p) ** (1.0 / p))


def real_inner_product(u: LatticeState, v: LatticeState) -> float:
    """Re sum u_n conj(v_n)."""
    _check_same_geometry(u, v)
    return float(np.real(np.vdot(_finite_amplitudes(v), _finite_amplitudes(u))))


def weighted_inner_product(u: LatticeState, v: LatticeState, w: Weight) -> float:
    """Re sum theta_n u_n conj(v_n)."""
    _check_same_geometry(u, v)
    theta = w.on(u.geometry)
    return float(np.real(np.sum(theta * _finite_amplitudes(u) * np.conj(_finite_amplitudes(v)))))


def norm_equivalence_constants(p: float, q: float, L: int) -> Tuple[float, float]:
    """
    Sharp constants c1, c2 with c1 ||psi||_p <= ||psi||_q <= c2 ||psi||_p on L sites.

    Args:
        p: Smaller exponent, p >= 1
        q: Larger exponent, q <= inf
        L: Number of sites

    Returns:
        (L^(1/q - 1/p), 1)

    Raises:
        ParameterOrderError: if p > q
    """
    if p > q:
        raise ParameterOrderError(f"norm_equivalence_constants needs p <= q, got p={p}, q={q}")
    if p < 1:
        raise ValueError(f"p must be at least 1, got {p}")
    if L < 1:
        raise ValueError(f"L must be positive, got {L}")
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    inv_q = 0.0 if math.isinf(q) else 1.0 / q
    return float(L) ** (inv_q - inv_p), 1.0


@dataclass(frozen=True)
class ScalingProfile:
    """Initial-data scaling |u_n(0)| ~ amplitude (|n| + 1)^delta, so sigma = 1 + delta."""

    delta: float = 0.0
    amplitude: float = 1.0
    phase: float = 0.0
    # used by the exponentially localized kind only
    localization: float = 1.0
    support: Optional[int] = None

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if self.localization < 0:
            raise ValueError(f"localization must be nonnegative, got {self.localization}")

    @property
    def sigma(self) -> float:
        return 1.0 + self.delta


def make_initial_data(
    geometry: LatticeGeometry,
    profile: ScalingProfile,
    kind: str = IMAGINARY_POSITIVE,
    seed: int = 0,
) -> LatticeState:
    """
    Initial datum with controlled spatial scaling.

    Args:
        geometry: Target lattice
        profile: Amplitude, decay exponent and phase
        kind: imaginary-positive (i e^{i phase} times the profile),
            real-positive (e^{i phase} times the profile), random-phase
            (independent uniform phases from ``seed``), localized
            (amplitude e^{-localization |n|} on |n| <= support) or zero
        seed: Seed for the random-phase kind

    Returns:
        State at time 0
    """
    if kind not in INITIAL_DATA_KINDS:
        raise ValueError(f"Unknown initial data kind {kind!r}; expected one of {INITIAL_DATA_KINDS}")

    n = np.abs(geometry.sites()).astype(float)
    rotation = np.exp(1j * profile.phase)

    if kind in (IMAGINARY_POSITIVE, REAL_POSITIVE) and abs(profile.phase) >= math.pi / 2:
        raise ValueError(f"|phase| must stay below pi/2 for {kind} data, got {profile.phase}")

    if kind == ZERO:
        return LatticeState.zeros(geometry)

    if kind == LOCALIZED:
        support = geometry.N if profile.support is None else min(profile.support, geometry.N)
        moduli = profile.amplitude * np.exp(-profile.localization * n)
        moduli[n > support] = 0.0
        return LatticeState(geometry, moduli * 1j * rotation)

    moduli = profile.amplitude * (n + 1.0) ** profile.delta
    if kind == IMAGINARY_POSITIVE:
        amplitudes = moduli * 1j * rotation
    elif kind == REAL_POSITIVE:
        amplitudes = moduli * rotation
    else:
        rng = np.random.default_rng(seed)
        amplitudes = moduli * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, size=geometry.L))
    return LatticeState(geometry, amplitudes)


def rescale_to_norm(state: LatticeState, target: float, p: float = 2.0) -> LatticeState:
    """Multiply a nonzero state so that its l^p norm equals ``target``."""
    current = norm_p(state, p)
    if current == 0.0:
        raise ValueError("Cannot rescale the zero state")
    return state.with_amplitudes(state.amplitudes * (target / current))


def extend_by_zero(state: LatticeState, N_big: int) -> LatticeState:
    """Embed a state of half-width N into half-width N_big >= N, zero outside."""
    N = state.geometry.N
    if N_big < N:
        raise DimensionError(f"Cannot extend N={N} to smaller N={N_big}")
    padded = np.zeros(2 * N_big + 1, dtype=np.complex128)
    padded[N_big - N:N_big + N + 1] = state.amplitudes
    return LatticeState(LatticeGeometry(N_big, state.geometry.kind), padded, state.time, state.blown_up)


def restrict(state: LatticeState, N_small: int) -> LatticeState:
    """The window |n| <= N_small of a state."""
    N = state.geometry.N
    if not 0 <= N_small <= N:
        raise DimensionError(f"Cannot restrict N={N} to N={N_small}")
    window = state.amplitudes[N - N_small:N + N_small + 1]
    return LatticeState(LatticeGeometry(N_small, state.geometry.kind), window, state.time, state.blown_up)
