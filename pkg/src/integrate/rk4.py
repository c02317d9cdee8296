"""
Classical fourth-order Runge-Kutta stepping with blow-up detection.

The integrator takes steps of the configured size, shrinks them when the
sup-norm grows by more than ``growth_guard`` in one step (rolling the step
back), and declares blow-up at the first accepted step whose sup-norm reaches
``blowup_threshold``. With ``step_fraction`` set, each step is also capped at
step_fraction * ||u||_inf / ||du/dt||_inf, which tracks the shrinking time
scale of a solution approaching a singularity.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from lattice import LatticeState, NonFiniteInputError, norm_p
from models import Derivative

logger = logging.getLogger(__name__)

Observer = Callable[[LatticeState], float]

# relative slack used when deciding whether a step lands on t_max
_END_SLACK = 1e-12


@dataclass(frozen=True)
class IntegratorConfig:
    """Step size, horizon and blow-up detection settings."""

    dt: float = 1e-3
    t_max: float = 10.0
    blowup_threshold: float = 1e6
    dt_min: float = 1e-12
    refine_factor: int = 2
    observer_stride: int = 1
    growth_guard: float = 10.0
    step_fraction: Optional[float] = 0.05
    keep_states: bool = False
    # lower sup-norm levels whose first crossing times are reported next to t_sim
    report_thresholds: Tuple[float, ...] = (1e4, 1e6, 1e8)

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if not 0 < self.dt_min < self.dt:
            raise ValueError(f"dt_min must lie in (0, dt), got dt_min={self.dt_min}, dt={self.dt}")
        if not self.blowup_threshold > 1:
            raise ValueError(f"blowup_threshold must exceed 1, got {self.blowup_threshold}")
        if int(self.refine_factor) != self.refine_factor or self.refine_factor < 2:
            raise ValueError(f"refine_factor must be an integer >= 2, got {self.refine_factor}")
        if int(self.observer_stride) != self.observer_stride or self.observer_stride < 1:
            raise ValueError(f"observer_stride must be a positive integer, got {self.observer_stride}")
        if not self.growth_guard > 1:
            raise ValueError(f"growth_guard must exceed 1, got {self.growth_guard}")
        if self.step_fraction is not None and not self.step_fraction > 0:
            raise ValueError(f"step_fraction must be positive or None, got {self.step_fraction}")
        if any(not level > 1 for level in self.report_thresholds):
            raise ValueError(f"report_thresholds must all exceed 1, got {self.report_thresholds}")

    def tracked_thresholds(self) -> Tuple[float, ...]:
        """Report thresholds below blowup_threshold, ascending, then blowup_threshold itself."""
        lower = sorted(level for level in set(self.report_thresholds) if level < self.blowup_threshold)
        return tuple(lower) + (self.blowup_threshold,)


@dataclass(frozen=True)
class BlowUpReport:
    """
    Outcome of one integration.

    ``t_sim`` is the first time the sup-norm reached ``threshold`` (None when
    the run reached t_max). ``dt_at_crossing`` is the local step there, i.e.
    the resolution of ``t_sim``.
    ``t_sim_by_threshold`` maps each tracked sup-norm level (keyed by its
    ``%g`` form) to the first time it was reached. ``guard_violations`` counts
    steps accepted at dt_min although they broke the growth guard; any such
    step makes the run ``low_confidence``.
    """

    blew_up: bool
    t_sim: Optional[float]
    threshold: float
    final_norm: float
    refinements: int
    bound_t_star: Optional[float] = None
    bound_valid: bool = False
    low_confidence: bool = False
    dt_at_crossing: Optional[float] = None
    growth_guard: float = 10.0
    t_final: float = 0.0
    steps: int = 0
    guard_violations: int = 0
    t_sim_by_threshold: Dict[str, float] = field(default_factory=dict)

    def with_bound(self, t_star: Optional[float], valid: bool) -> "BlowUpReport":
        return replace(self, bound_t_star=t_star, bound_valid=valid)

    @property
    def within_bound(self) -> Optional[bool]:
        """T_sim <= T* when both apply, else None."""
        if not (self.blew_up and self.bound_valid and self.bound_t_star is not None):
            return None
        return self.t_sim <= self.bound_t_star

    def to_dict(self) -> Dict[str, object]:
        return {
            "blew_up": self.blew_up,
            "t_sim": self.t_sim,
            "threshold": self.threshold,
            "final_norm": self.final_norm,
            "refinements": self.refinements,
            "bound_t_star": self.bound_t_star,
            "bound_valid": self.bound_valid,
            "within_bound": self.within_bound,
            "low_confidence": self.low_confidence,
            "dt_at_crossing": self.dt_at_crossing,
            "growth_guard": self.growth_guard,
            "t_final": self.t_final,
            "steps": self.steps,
            "guard_violations": self.guard_violations,
            "t_sim_by_threshold": dict(self.t_sim_by_threshold),
        }


@dataclass
class Trajectory:
    """Observed samples (t, ||u||_2, ||u||_inf, named functionals) of one run."""

    times: List[float] = field(default_factory=list)
    norm2: List[float] = field(default_factory=list)
    norm_inf: List[float] = field(default_factory=list)
    functionals: Dict[str, List[float]] = field(default_factory=dict)
    states: List[LatticeState] = field(default_factory=list)
    final_state: Optional[LatticeState] = None

    def record(self, state: LatticeState, observers: Mapping[str, Observer], keep_state: bool = False):
        self.times.append(state.time)
        self.norm2.append(norm_p(state, 2))
        self.norm_inf.append(norm_p(state, math.inf))
        for name, observer in observers.items():
            self.functionals.setdefault(name, []).append(float(observer(state)))
        if keep_state:
            self.states.append(state)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def functional_names(self) -> List[str]:
        return list(self.functionals)

    def series(self, name: str) -> np.ndarray:
        """Samples of a named functional, or of 'norm2' / 'norm_inf'."""
        if name == "norm2":
            return np.asarray(self.norm2)
        if name == "norm_inf":
            return np.asarray(self.norm_inf)
        if name not in self.functionals:
            raise KeyError(f"Functional {name!r} was not observed; have {self.functional_names}")
        return np.asarray(self.functionals[name])

    def rows(self) -> Iterator[Tuple[float, ...]]:
        names = self.functional_names
        for i, t in enumerate(self.times):
            yield (t, self.norm2[i], self.norm_inf[i], *(self.functionals[name][i] for name in names))


class StepController:
    """
    Current step size: divided by refine_factor on a rejected step, grown back
    by the same factor on each accepted step, never below dt_min or above dt.
    """

    def __init__(self, cfg: IntegratorConfig):
        self.base = cfg.dt
        self.minimum = cfg.dt_min
        self.factor = cfg.refine_factor
        self.step = cfg.dt

    def propose(self, cap: float) -> float:
        return max(self.minimum, min(self.step, cap))

    def at_minimum(self, tried: float) -> bool:
        return tried <= self.minimum * (1.0 + 1e-12)

    def refine(self, tried: float) -> float:
        self.step = max(self.minimum, tried / self.factor)
        return self.step

    def accept(self):
        self.step = min(self.base, self.step * self.factor)


def _rk4_stages(rhs: Derivative, t: float, a: np.ndarray, dt: float,
                k1: Optional[np.ndarray] = None) -> Tuple[np.ndarray, Optional[float]]:
    """One classical RK4 update; on a non-finite stage returns (stage, stage time)."""
    with np.errstate(over="ignore", invalid="ignore"):
        if k1 is None:
            k1 = rhs(t, a)
        if not np.all(np.isfinite(k1)):
            return k1, t
        k2 = rhs(t + dt / 2, a + (dt / 2) * k1)
        if not np.all(np.isfinite(k2)):
            return k2, t + dt / 2
        k3 = rhs(t + dt / 2, a + (dt / 2) * k2)
        if not np.all(np.isfinite(k3)):
            return k3, t + dt / 2
        k4 = rhs(t + dt, a + dt * k3)
        if not np.all(np.isfinite(k4)):
            return k4, t + dt
        new = a + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(new)):
            return new, t + dt
        return new, None


def rk4_step(state: LatticeState, rhs: Derivative, dt: float) -> LatticeState:
    """
    Advance a finite state by one classical RK4 step.

    Args:
        state: Finite lattice state
        rhs: Array-level derivative f(t, a)
        dt: Step size

    Returns:
        The state at time + dt, or a state flagged ``blown_up`` carrying the
        non-finite stage values and the stage time
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if state.blown_up or not state.is_finite:
        raise NonFiniteInputError("rk4_step needs a finite state")
    a = np.array(state.amplitudes, dtype=np.complex128)
    values, failed_at = _rk4_stages(rhs, state.time, a, dt)
    if failed_at is not None:
        return state.with_amplitudes(values, time=failed_at, blown_up=True)
    return state.with_amplitudes(values, time=state.time + dt)


def _sup(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def integrate(
    state0: LatticeState,
    rhs: Derivative,
    cfg: IntegratorConfig,
    observers: Optional[Mapping[str, Observer]] = None,
) -> Tuple[Trajectory, BlowUpReport]:
    """
    Integrate from state0 up to time cfg.t_max or until blow-up.

    Observers are called on the initial state, every ``observer_stride``
    accepted steps, and on the final state.

    Args:
        state0: Finite initial state
        rhs: Array-level derivative f(t, a)
        cfg: Integrator settings
        observers: Named functionals recorded along the trajectory

    Returns:
        (trajectory, blow-up report)
    """
    if state0.blown_up or not state0.is_finite:
        raise NonFiniteInputError("integrate needs a finite initial state")

    observers = dict(observers or {})
    geometry = state0.geometry
    trajectory = Trajectory()
    controller = StepController(cfg)

    t = state0.time
    t_end = cfg.t_max
    end_slack = _END_SLACK * max(1.0, abs(t_end))
    a = np.array(state0.amplitudes, dtype=np.complex128)
    trajectory.record(state0, observers, cfg.keep_states)

    refinements = 0
    accepted = 0
    blew_up = False
    low_confidence = False
    t_sim: Optional[float] = None
    dt_at_crossing: Optional[float] = None
    final_norm = _sup(a)
    last_recorded = 0
    guard_violations = 0
    pending = list(cfg.tracked_thresholds())
    crossings: Dict[str, float] = {}

    def note_crossings(norm: float, time: float):
        while pending and norm >= pending[0]:
            crossings[format(pending.pop(0), "g")] = time

    note_crossings(final_norm, t)

    if final_norm >= cfg.blowup_threshold:
        blew_up, t_sim = True, t
        logger.info(f"Initial sup-norm {final_norm:.3e} already at threshold {cfg.blowup_threshold:.1e}")

    while not blew_up and t_end - t > end_slack:
        sup = _sup(a)
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = rhs(t, a)
        if not np.all(np.isfinite(k1)):
            blew_up, low_confidence, t_sim, final_norm = True, True, t, math.inf
            logger.warning(f"Non-finite derivative at t={t:.6g}; blow-up flagged low-confidence")
            break

        cap = math.inf
        rate = _sup(k1)
        if cfg.step_fraction is not None and rate > 0 and sup > 0:
            cap = cfg.step_fraction * sup / rate
        dt = controller.propose(cap)

        while True:
            landing = t + dt >= t_end - end_slack
            step = t_end - t if landing else dt
            new, failed_at = _rk4_stages(rhs, t, a, step, k1)
            too_fast = failed_at is None and sup > 0 and _sup(new) > cfg.growth_guard * sup
            if failed_at is None and not too_fast:
                break
            if controller.at_minimum(dt):
                if failed_at is not None:
                    break
                guard_violations += 1
                low_confidence = True
                if guard_violations == 1:
                    logger.warning(f"Growth guard exceeded at dt_min, t={t:.6g}; accepting step, run flagged low-confidence")
                break
            refinements += 1
            dt = controller.refine(dt)

        if failed_at is not None:
            blew_up, low_confidence, t_sim, final_norm = True, True, t, math.inf
            logger.warning(f"Non-finite values at dt_min near t={t:.6g}; blow-up flagged low-confidence")
            break

        t = t_end if landing else t + step
        a = new
        accepted += 1
        controller.accept()
        final_norm = _sup(a)
        note_crossings(final_norm, t)

        crossed = final_norm >= cfg.blowup_threshold
        if crossed or accepted % cfg.observer_stride == 0 or t_end - t <= end_slack:
            trajectory.record(LatticeState(geometry, a, t), observers, cfg.keep_states)
            last_recorded = accepted
        if crossed:
            blew_up, t_sim, dt_at_crossing = True, t, step

    trajectory.final_state = LatticeState(geometry, a, t, blown_up=not bool(np.all(np.isfinite(a))))
    if accepted and last_recorded != accepted and trajectory.final_state.is_finite:
        trajectory.record(trajectory.final_state, observers, cfg.keep_states)

    report = BlowUpReport(
        blew_up=blew_up,
        t_sim=t_sim,
        threshold=cfg.blowup_threshold,
        final_norm=final_norm,
        refinements=refinements,
        low_confidence=low_confidence,
        dt_at_crossing=dt_at_crossing,
        growth_guard=cfg.growth_guard,
        t_final=t,
        steps=accepted,
        guard_violations=guard_violations,
        t_sim_by_threshold=crossings,
    )
    if guard_violations > 1:
        logger.warning(f"{guard_violations} steps accepted at dt_min above the growth guard {cfg.growth_guard:g}")
    if blew_up:
        logger.info(f"Blow-up at T_sim={t_sim:.10g} (dt={dt_at_crossing}, refinements={refinements})")
    return trajectory, report


def conserved_drift(trajectory: Trajectory, functional: str) -> float:
    """
    Largest relative deviation of an observed functional from its initial value.

    Args:
        trajectory: Non-empty trajectory
        functional: Name of an observed functional ('norm2' and 'norm_inf' also work)

    Returns:
        max_t |Q(t) - Q(0)| / max(|Q(0)|, 1)
    """
    values = trajectory.series(functional)
    if values.size == 0:
        raise ValueError("conserved_drift needs a non-empty trajectory")
    q0 = values[0]
    return float(np.max(np.abs(values - q0)) / max(abs(q0), 1.0))
