"""
Experiment runners behind the CLI subcommands.

Each ``run_*`` function takes a resolved configuration, does the numerical work,
writes its CSV/JSON artifacts into an output directory and returns the result
object, so tests can check numbers without parsing files.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from lattice import (
    HypothesisError,
    LatticeError,
    LatticeState,
    Weight,
    extend_by_zero,
    norm_p,
    rescale_to_norm,
    restrict,
    weighted_norm,
)
from integrate import BlowUpReport, IntegratorConfig, Observer, Trajectory, conserved_drift, integrate
from models import GAUGE, NON_GAUGE, dcgl_to_general, local_existence_time, make_rhs
from diagnostics import (
    IMAG_BETA,
    REAL_K,
    AttractorReport,
    BoundInput,
    absorbing_finite,
    absorbing_weighted,
    bound_gauge_drgl,
    bound_nongauge,
    charge,
    dcgl_exponential_margin,
    default_finite_rho1,
    dissipation_window,
    dnls_sobolev_bound,
    energy_drgl,
    exponential_condition_holds,
    finite_envelope,
    finite_radii,
    hamiltonian_dnls,
    is_monotone,
    lambda1_star,
    m_imag,
    mass_sigma,
    modified_energy_dnls,
    n_real,
    sigma0,
    sobolev_norm_sq,
    tail_entry_time,
    tail_mass,
    weighted_envelope,
)
from utils import write_json_file

from .config import DNLS, DRGL, ExperimentConfig, SweepConfig
from .persistence import write_csv, write_trajectory_csv

logger = logging.getLogger(__name__)

BOUND_NONGAUGE_IMAG = "non-gauge-imag-beta"
BOUND_NONGAUGE_REAL = "non-gauge-real-k"
BOUND_GAUGE_DRGL = "gauge-drgl"
BOUND_DNLS_GLOBAL = "dnls-global"

RESULT_COLUMNS = ("axis", "N", "L", "sigma", "T_sim", "T_star", "valid", "threshold", "dt", "refinements")
WEIGHTED_COLUMNS = ("sigma0", "decay_rate", "predicted_decay_rate")

# default exponential weight rate of the weighted-space experiments
DEFAULT_MU = 0.5


@dataclass
class BoundEvaluation:
    """Blow-up bound selected for a configured datum, with the reasons when none applies."""

    bound_kind: Optional[str] = None
    t_star: Optional[float] = None
    valid: bool = False
    m0: Optional[float] = None
    energy0: Optional[float] = None
    warnings: List[str] = field(default_factory=list)
    extras: Dict[str, object] = field(default_factory=dict)

    def warn(self, message: str):
        logger.warning(message)
        self.warnings.append(message)

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def _nongauge_bound(cfg: ExperimentConfig, state0: LatticeState, result: BoundEvaluation):
    eff = cfg.effective_params()
    candidates = (
        (IMAG_BETA, BOUND_NONGAUGE_IMAG, "beta", eff.beta, m_imag),
        (REAL_K, BOUND_NONGAUGE_REAL, "k", eff.k, n_real),
    )
    for case, bound_kind, name, coefficient, functional in candidates:
        if not coefficient > 0:
            continue
        m0 = functional(state0, eff.gamma, cfg.sigma)
        if not m0 > 0:
            result.warn(f"{bound_kind}: initial functional {m0:.6g} is not positive")
            continue
        inp = BoundInput(params=eff, p=cfg.p, sigma=cfg.sigma, L=state0.geometry.L, m0=m0)
        estimate = bound_nongauge(inp, case)
        result.bound_kind, result.m0 = bound_kind, m0
        result.t_star, result.valid = estimate.t_star, estimate.valid
        result.extras["dissipation_window"] = list(dissipation_window(inp, case))
        if not estimate.valid:
            result.warn(f"{bound_kind}: damping gamma={eff.gamma} outside the dissipation window, no bound")
        return
    result.warn("Non-gauge bound needs beta > 0 or k > 0 (after the sign convention) and a positive initial functional")


def _drgl_bound(cfg: ExperimentConfig, state0: LatticeState, result: BoundEvaluation):
    eff = cfg.effective_params()
    result.bound_kind = BOUND_GAUGE_DRGL
    if not eff.lambda_ > 0:
        result.warn(f"{BOUND_GAUGE_DRGL}: needs lambda > 0, got {eff.lambda_}")
        return
    if not eff.k > 0:
        result.warn(f"{BOUND_GAUGE_DRGL}: needs k > 0 (after the sign convention), got {eff.k}")
        return
    result.energy0 = energy_drgl(state0, eff.lambda_, eff.gamma, eff.k, cfg.p, cfg.sigma)
    if result.energy0 > 0:
        result.warn(f"{BOUND_GAUGE_DRGL}: initial energy {result.energy0:.6g} is positive")
        return
    m0 = mass_sigma(state0, cfg.sigma)
    if not m0 > 0:
        result.warn(f"{BOUND_GAUGE_DRGL}: zero initial mass")
        return
    inp = BoundInput(params=eff, p=cfg.p, sigma=cfg.sigma, L=state0.geometry.L, m0=m0)
    result.m0 = m0
    result.t_star, result.valid = bound_gauge_drgl(inp), True


def _dnls_bound(cfg: ExperimentConfig, state0: LatticeState, result: BoundEvaluation):
    eff = cfg.effective_params()
    result.bound_kind = BOUND_DNLS_GLOBAL
    if eff.alpha > 0:
        result.extras["dnls_sobolev_bound"] = dnls_sobolev_bound(state0, eff.alpha, eff.beta, cfg.p)
    else:
        result.warn(f"{BOUND_DNLS_GLOBAL}: a-priori bound needs alpha > 0, got {eff.alpha}")


def _weighted_extras(cfg: ExperimentConfig, result: BoundEvaluation):
    mu = cfg.mu
    result.extras["mu"] = mu
    result.extras["exponential_margin"] = dcgl_exponential_margin(cfg.params, mu)
    result.extras["exponential_condition"] = exponential_condition_holds(cfg.params, mu)
    if cfg.epsilon is not None or cfg.params.lambda_ > 0:
        general = dcgl_to_general(cfg.lhs_params())
        result.extras["sigma0"] = sigma0(general, Weight.exponential(mu), cfg.weighted_epsilon())
        result.extras["epsilon"] = cfg.weighted_epsilon()


def evaluate_bounds(cfg: ExperimentConfig, state0: Optional[LatticeState] = None) -> BoundEvaluation:
    """
    Select and evaluate the blow-up bound whose hypotheses the configured datum meets.

    Non-gauge: the imaginary (beta > 0, M(0) > 0) or real (k > 0, N(0) > 0) bound.
    Gauge with alpha = beta = 0: the DRGL bound (lambda > 0, k > 0, E(u0) <= 0).
    Gauge with lambda = k = gamma = 0: DNLS, globally bounded, no T*.
    Coefficients are taken after the sign convention, i.e. as +(k + i beta) F(u).
    Unmet hypotheses are recorded as warnings and leave ``valid`` false.
    """
    state0 = cfg.initial_state() if state0 is None else state0
    eff = cfg.effective_params()
    result = BoundEvaluation()

    result.extras["lambda1_star"] = lambda1_star(state0.geometry.N)
    norm0 = norm_p(state0, 2)
    if norm0 > 0:
        result.extras["local_existence_time"] = local_existence_time(2.0 * norm0, cfg.nonlinearity)

    if cfg.forcing_amplitude != 0:
        result.warn("Forcing present: blow-up bounds assume f = 0")
    elif cfg.nonlinearity.kind == NON_GAUGE:
        _nongauge_bound(cfg, state0, result)
    elif cfg.preset == DNLS or (eff.lambda_ == 0 and eff.k == 0 and eff.gamma == 0):
        _dnls_bound(cfg, state0, result)
    elif eff.alpha == 0 and eff.beta == 0:
        _drgl_bound(cfg, state0, result)
    else:
        result.warn("No blow-up bound for the gauge equation with alpha or beta nonzero")

    if cfg.mu is not None:
        _weighted_extras(cfg, result)
    return result


def build_observers(cfg: ExperimentConfig) -> Dict[str, Observer]:
    """Functionals recorded along a run: charge always, then per preset."""
    eff = cfg.effective_params()
    p, sigma = cfg.p, cfg.sigma
    observers: Dict[str, Observer] = {"charge": charge}
    if cfg.preset == DNLS:
        observers["hamiltonian"] = lambda s: hamiltonian_dnls(s, eff.alpha, eff.beta, p)
        observers["modified_energy"] = lambda s: modified_energy_dnls(s, eff.alpha, eff.beta, p)
        observers["sobolev_norm_sq"] = sobolev_norm_sq
    elif cfg.preset == DRGL:
        observers["energy"] = lambda s: energy_drgl(s, eff.lambda_, eff.gamma, eff.k, p, sigma)
        observers["mass"] = lambda s: mass_sigma(s, sigma)
    elif cfg.nonlinearity.kind == NON_GAUGE:
        observers["m_imag"] = lambda s: m_imag(s, eff.gamma, sigma)
        observers["n_real"] = lambda s: n_real(s, eff.gamma, sigma)
    else:
        observers["mass"] = lambda s: mass_sigma(s, sigma)
    return observers


@dataclass
class SimulationResult:
    config: ExperimentConfig
    initial_state: LatticeState
    trajectory: Trajectory
    report: BlowUpReport
    bounds: BoundEvaluation

    def summary(self) -> Dict[str, object]:
        """Drifts and monotonicity checks of the observed functionals."""
        names = self.trajectory.functional_names
        summary: Dict[str, object] = {"samples": len(self.trajectory)}
        if not len(self.trajectory):
            return summary
        if self.config.preset == DNLS:
            summary["charge_drift"] = conserved_drift(self.trajectory, "charge")
            summary["hamiltonian_drift"] = conserved_drift(self.trajectory, "hamiltonian")
            bound = self.bounds.extras.get("dnls_sobolev_bound")
            if bound is not None:
                peak = float(np.max(self.trajectory.series("sobolev_norm_sq")))
                summary["sobolev_peak"] = peak
                summary["sobolev_bound_respected"] = peak <= bound * (1.0 + 1e-9)
        if "energy" in names:
            energy = self.trajectory.series("energy")
            summary["energy_nonincreasing"] = is_monotone(energy, increasing=False, tol=1e-9 * max(1.0, abs(energy[0])))
        if "m_imag" in names:
            summary["m_imag_nondecreasing"] = is_monotone(self.trajectory.series("m_imag"), increasing=True, tol=1e-9)
        if "n_real" in names and self.config.effective_params().k > 0:
            summary["n_real_nondecreasing"] = is_monotone(self.trajectory.series("n_real"), increasing=True, tol=1e-9)
        summary["within_bound"] = self.report.within_bound
        return summary


def simulate(cfg: ExperimentConfig) -> SimulationResult:
    """Integrate the configured experiment and attach the applicable bound."""
    state0 = cfg.initial_state()
    bounds = evaluate_bounds(cfg, state0)
    rhs = make_rhs(cfg.equation_params(), cfg.nonlinearity, cfg.convention)
    trajectory, report = integrate(state0, rhs, cfg.integrator, build_observers(cfg))
    report = report.with_bound(bounds.t_star, bounds.valid)
    if report.within_bound is False:
        logger.warning(f"T_sim={report.t_sim:.10g} exceeds T*={report.bound_t_star:.10g}")
    return SimulationResult(cfg, state0, trajectory, report, bounds)


def run_simulate(cfg: ExperimentConfig, out_dir: Path) -> SimulationResult:
    """
    Single run: writes trajectory.csv and report.json into out_dir.

    Args:
        cfg: Resolved experiment
        out_dir: Output directory

    Returns:
        The simulation result
    """
    logging.info("-" * 20)
    logging.info(f"simulate: {cfg.label} (preset={cfg.preset}, N={cfg.N}, p={cfg.p})")
    result = simulate(cfg)
    write_trajectory_csv(out_dir / "trajectory.csv", result.trajectory)
    write_json_file(out_dir / "report.json", {
        "provenance": cfg.provenance("simulate"),
        "report": result.report.to_dict(),
        "bounds": result.bounds.to_dict(),
        "summary": result.summary(),
    })
    return result


@dataclass(frozen=True)
class ResultRow:
    """One sweep cell: the axis value with its measured and bounded existence times."""

    axis_value: float
    N: int
    L: int
    sigma: float
    T_sim: Optional[float]
    T_star: Optional[float]
    valid: bool
    threshold: float
    dt: float
    refinements: int
    # (sigma0, decay_rate, predicted_decay_rate) of a mu sweep
    weighted: Optional[Tuple[Optional[float], ...]] = None
    t_sim_by_threshold: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.T_sim is not None and self.T_sim < 0:
            raise ValueError(f"T_sim must be nonnegative, got {self.T_sim}")

    def values(self) -> Tuple[object, ...]:
        base = (self.axis_value, self.N, self.L, self.sigma, self.T_sim, self.T_star,
                self.valid, self.threshold, self.dt, self.refinements)
        return base if self.weighted is None else base + tuple(self.weighted)


def _weighted_cell(cfg: ExperimentConfig, axis_value: float) -> Tuple[Optional[float], ...]:
    try:
        result = _weighted_attractor(cfg)
    except (LatticeError, ValueError) as e:
        logger.warning(f"Cell {axis_value}: weighted measurement failed: {e}")
        return (None,) * len(WEIGHTED_COLUMNS)
    measurements = result.measurements
    return (result.report.sigma0, measurements.get("decay_rate"), measurements["predicted_decay_rate"])


def run_cell(cfg: ExperimentConfig, axis_value: float, weighted: bool = False) -> ResultRow:
    """
    One sweep cell. A cell whose hypotheses or parameters fail gives a row with
    valid = false instead of stopping the sweep.

    With ``weighted`` the cell also runs the weighted absorbing-ball measurement
    and carries (sigma0, decay_rate, predicted_decay_rate) in the row.
    """
    extra = _weighted_cell(cfg, axis_value) if weighted else None
    try:
        result = simulate(cfg)
    except (LatticeError, ValueError) as e:
        logger.warning(f"Cell {axis_value}: {e}")
        return ResultRow(
            axis_value=axis_value, N=cfg.N, L=2 * cfg.N + 1, sigma=cfg.sigma,
            T_sim=None, T_star=None, valid=False,
            threshold=cfg.integrator.blowup_threshold, dt=cfg.integrator.dt, refinements=0,
            weighted=extra,
        )
    report = result.report
    return ResultRow(
        axis_value=axis_value,
        N=cfg.N,
        L=result.initial_state.geometry.L,
        sigma=cfg.sigma,
        T_sim=report.t_sim,
        T_star=report.bound_t_star,
        valid=report.bound_valid,
        threshold=report.threshold,
        dt=report.dt_at_crossing if report.dt_at_crossing is not None else cfg.integrator.dt,
        refinements=report.refinements,
        weighted=extra,
        t_sim_by_threshold=dict(report.t_sim_by_threshold),
    )


def sweep_columns(sweep: SweepConfig) -> Tuple[str, ...]:
    return RESULT_COLUMNS + WEIGHTED_COLUMNS if sweep.axis == "mu" else RESULT_COLUMNS


def sweep_rows(sweep: SweepConfig, threads: int = 1) -> List[ResultRow]:
    """Run every cell, concurrently when threads > 1; rows come back in axis order."""
    cells = sweep.cells()
    weighted = sweep.axis == "mu"
    rows: List[Optional[ResultRow]] = [None] * len(cells)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = {pool.submit(run_cell, cfg, value, weighted): index for index, value, cfg in cells}
        for done, future in enumerate(as_completed(futures), start=1):
            index = futures[future]
            rows[index] = future.result()
            logger.info(f"[{done}/{len(cells)}] {sweep.axis}={cells[index][1]:g}: T_sim={rows[index].T_sim}")
    return rows


def run_sweep(sweep: SweepConfig, out_dir: Path, threads: int = 1) -> List[ResultRow]:
    """
    Parameter sweep: one ResultRow per axis value in the results CSV.

    A mu sweep adds the weighted columns (sigma0, decay_rate, predicted_decay_rate).

    Args:
        sweep: Base experiment plus axis and values
        out_dir: Output directory for the CSV and sweep.json
        threads: Worker threads

    Returns:
        Rows in axis order
    """
    logging.info("-" * 20)
    logging.info(f"sweep: {sweep.base.label}, axis {sweep.axis} over {len(sweep.values)} values")
    rows = sweep_rows(sweep, threads)
    write_csv(out_dir / sweep.output, sweep_columns(sweep), (row.values() for row in rows))

    violations = [row.axis_value for row in rows
                  if row.valid and row.T_sim is not None and row.T_star is not None and row.T_sim > row.T_star]
    if violations:
        logger.warning(f"T_sim > T* at {sweep.axis} = {violations}")
    write_json_file(out_dir / "sweep.json", {
        "provenance": sweep.base.provenance("sweep"),
        "axis": sweep.axis,
        "values": list(sweep.values),
        "valid_cells": sum(row.valid for row in rows),
        "blown_up_cells": sum(row.T_sim is not None for row in rows),
        "bound_violations": violations,
        "t_sim_by_threshold": [row.t_sim_by_threshold for row in rows],
    })
    return rows


@dataclass
class AttractorResult:
    report: AttractorReport
    measurements: Dict[str, object]
    header: Tuple[str, ...]
    rows: List[Tuple[object, ...]]


def first_entry_time(times: Sequence[float], norms: Sequence[float], radius: float) -> Optional[float]:
    """Earliest sample time after which every sample stays within radius, or None."""
    inside = np.asarray(norms) <= radius
    if not inside[-1]:
        return None
    outside = np.flatnonzero(~inside)
    return float(times[0]) if outside.size == 0 else float(times[outside[-1] + 1])


def _finite_attractor(cfg: ExperimentConfig) -> AttractorResult:
    if cfg.nonlinearity.kind != GAUGE:
        raise HypothesisError("Finite absorbing ball needs the gauge nonlinearity", term="nonlinearity")
    settings = cfg.attractor
    eff = cfg.effective_params()
    _, _, rho_limit = finite_radii(eff, cfg.p, cfg.N)
    rho1 = settings.rho1 if settings.rho1 is not None else default_finite_rho1(rho_limit, settings.rho1_factor)
    report = absorbing_finite(eff, cfg.p, cfg.N, rho1)
    logger.info(f"rho_limit={report.rho_limit:.6g}, rho1={rho1:.6g}, t0={report.t0:.6g}")

    shape = cfg.initial_state()
    integrator = replace(cfg.integrator, t_max=max(cfg.integrator.t_max, report.t0))
    rhs = make_rhs(cfg.equation_params(), cfg.nonlinearity, cfg.convention)

    runs = []
    rows: List[Tuple[object, ...]] = []
    for R in settings.initial_norms:
        trajectory, outcome = integrate(rescale_to_norm(shape, R), rhs, integrator)
        entry = None if outcome.blew_up else first_entry_time(trajectory.times, trajectory.norm2, rho1)
        runs.append({
            "initial_norm": R,
            "entry_time": entry,
            "entered_by_t0": entry is not None and entry <= report.t0,
            "final_norm2": trajectory.norm2[-1],
            "blew_up": outcome.blew_up,
        })
        logger.info(f"R={R:.3g}: entry time {entry}, final norm {trajectory.norm2[-1]:.6g}")
        for t, value in zip(trajectory.times, trajectory.norm2):
            rows.append((R, t, value, finite_envelope(report, t) if t > 0 else None))

    measurements = {
        "runs": runs,
        "all_entered_by_t0": all(run["entered_by_t0"] for run in runs),
        "t_max": integrator.t_max,
    }
    if report.trivial_dynamics:
        measurements["final_norm2_max"] = max(run["final_norm2"] for run in runs)
    return AttractorResult(report, measurements, ("initial_norm", "t", "norm2", "envelope"), rows)


def _weighted_setup(cfg: ExperimentConfig) -> Tuple[Weight, float, float]:
    """(weight, sigma0, epsilon) of the weighted regime; raises when it is not dissipative."""
    if cfg.nonlinearity.kind != GAUGE:
        raise HypothesisError("Weighted absorbing ball needs the gauge nonlinearity", term="nonlinearity")
    general = dcgl_to_general(cfg.lhs_params())
    weight = Weight.exponential(cfg.mu if cfg.mu is not None else DEFAULT_MU)
    epsilon = cfg.weighted_epsilon()
    rate = sigma0(general, weight, epsilon)
    if not general.zeta_hat > 0:
        raise HypothesisError(
            f"Weighted regime needs zeta_hat > 0 (k > 0 in the lhs convention), got {general.zeta_hat}",
            term="zeta_hat",
        )
    if not rate > 0:
        raise HypothesisError(
            f"sigma0 = {rate:.6g} <= 0: damping delta_hat = {general.delta_hat:.6g} does not dominate "
            f"epsilon/2 + coupling penalties (alpha_hat = {general.alpha_hat}, beta_hat = {general.beta_hat})",
            term="sigma0",
        )
    return weight, rate, epsilon


def _weighted_attractor(cfg: ExperimentConfig) -> AttractorResult:
    settings = cfg.attractor
    weight, rate, epsilon = _weighted_setup(cfg)
    general = dcgl_to_general(cfg.lhs_params())
    g_norm_sq = weighted_norm(general.forcing, weight) ** 2 if general.forcing is not None else 0.0

    state0 = cfg.initial_state()
    R = weighted_norm(state0, weight)
    rho_sq = g_norm_sq / (2.0 * rate * epsilon)
    if settings.rho1 is not None:
        rho1 = settings.rho1
    elif rho_sq > 0:
        rho1 = settings.rho1_factor * math.sqrt(rho_sq)
    else:
        rho1 = 0.1 * R if R > 0 else 1.0
    report = absorbing_weighted(g_norm_sq, rate, epsilon, R, rho1)
    eta = settings.eta if settings.eta is not None else rate * 1e-4
    t_eta = tail_entry_time(report.entry_time, rate, rho1, eta)
    logger.info(f"sigma0={rate:.6g}, rho^2={rho_sq:.6g}, entry={report.entry_time:.6g}, T(eta)={t_eta:.6g}")

    observers: Dict[str, Observer] = {"weighted_norm_sq": lambda s: weighted_norm(s, weight) ** 2}
    if 2 * settings.tail_M < cfg.N:
        observers["tail_mass"] = lambda s: tail_mass(s, weight, settings.tail_M)
    else:
        logger.warning(f"tail window 2M={2 * settings.tail_M} reaches N={cfg.N}; tail masses not recorded")

    rhs = make_rhs(cfg.equation_params(), cfg.nonlinearity, cfg.convention)
    trajectory, outcome = integrate(state0, rhs, cfg.integrator, observers)
    if outcome.blew_up:
        raise HypothesisError(f"Weighted run blew up at t={outcome.t_sim}", term="sigma0")

    times = np.asarray(trajectory.times)
    values = trajectory.series("weighted_norm_sq")
    envelope = np.array([weighted_envelope(R, rate, rho_sq, t) for t in times])
    measurements: Dict[str, object] = {
        "eta": eta,
        "tail_entry_time": t_eta,
        "tail_bound": eta / rate,
        "predicted_decay_rate": 2.0 * rate,
        "envelope_ratio_max": float(np.max(values / np.maximum(envelope, np.finfo(float).tiny))),
        "t_final": outcome.t_final,
    }

    if g_norm_sq == 0:
        positive = values > 1e-280
        if np.count_nonzero(positive) >= 2:
            slope = np.polyfit(times[positive], np.log(values[positive]), 1)[0]
            measurements["decay_rate"] = float(-slope)
    else:
        late = times >= 0.75 * times[-1]
        measurements["limsup_weighted_norm_sq"] = float(np.max(values[late]))
        measurements["limsup_ratio"] = float(np.max(values[late]) / rho_sq)

    tails = trajectory.series("tail_mass") if "tail_mass" in observers else None
    if tails is not None:
        after = times >= t_eta
        measurements["tail_mass_max_after_T_eta"] = float(np.max(tails[after])) if np.any(after) else None
        checkpoints = {}
        for checkpoint in settings.checkpoints:
            index = int(np.searchsorted(times, checkpoint))
            if index < len(times):
                checkpoints[format(checkpoint, "g")] = float(tails[index])
        measurements["tail_mass_at_checkpoints"] = checkpoints

    rows = [
        (t, value, bound, None if tails is None else float(tails[i]))
        for i, (t, value, bound) in enumerate(zip(times, values, envelope))
    ]
    return AttractorResult(report, measurements, ("t", "weighted_norm_sq", "envelope", "tail_mass"), rows)


def attractor_experiment(cfg: ExperimentConfig) -> AttractorResult:
    if cfg.attractor.mode == "finite":
        return _finite_attractor(cfg)
    return _weighted_attractor(cfg)


def run_attractor_experiment(cfg: ExperimentConfig, out_dir: Path) -> AttractorResult:
    """
    Absorbing-ball experiment in finite or weighted mode.

    Writes attractor.json (the AttractorReport plus measurements) and decay.csv.

    Raises:
        HypothesisError: k >= 0 (finite) or sigma0 <= 0 (weighted)
    """
    logging.info("-" * 20)
    logging.info(f"attractor: {cfg.label} (mode={cfg.attractor.mode})")
    result = attractor_experiment(cfg)
    write_csv(out_dir / "decay.csv", result.header, result.rows)
    write_json_file(out_dir / "attractor.json", {
        "provenance": cfg.provenance("attractor"),
        "report": result.report.to_dict(),
        "measurements": result.measurements,
    })
    return result


@dataclass(frozen=True)
class TruncationRow:
    N: int
    N_ref: int
    sup_difference: float
    final_difference: float

    def values(self) -> Tuple[object, ...]:
        return (self.N, self.N_ref, self.sup_difference, self.final_difference)


def _paired_states(small: Trajectory, big: Trajectory) -> List[Tuple[LatticeState, LatticeState]]:
    by_time = {round(state.time, 12): state for state in big.states}
    pairs = [(state, by_time.get(round(state.time, 12))) for state in small.states]
    return [(a, b) for a, b in pairs if b is not None]


def truncation_difference(cfg: ExperimentConfig, N: int, weight: Weight, integrator: IntegratorConfig) -> TruncationRow:
    """Weighted distance on |n| <= N between the runs on N and 2N sites from the same zero-extended datum."""
    small0 = cfg.initial_state(N)
    big0 = extend_by_zero(small0, 2 * N)
    runs = []
    for state0, size in ((small0, N), (big0, 2 * N)):
        rhs = make_rhs(cfg.equation_params(size), cfg.nonlinearity, cfg.convention)
        trajectory, outcome = integrate(state0, rhs, integrator)
        if outcome.blew_up:
            raise HypothesisError(f"Truncation run with N={size} blew up at t={outcome.t_sim}", term="sigma0")
        runs.append(trajectory)

    differences = []
    for a, b in _paired_states(*runs):
        window = restrict(b, N)
        differences.append(weighted_norm(a.with_amplitudes(window.amplitudes - a.amplitudes), weight))
    if not differences:
        raise LatticeError(f"No common sample times between N={N} and N={2 * N}")
    return TruncationRow(N=N, N_ref=2 * N, sup_difference=max(differences), final_difference=differences[-1])


def truncation_rows(cfg: ExperimentConfig) -> List[TruncationRow]:
    weight, _, _ = _weighted_setup(cfg)
    settings = cfg.truncation
    T = settings.T if settings.T is not None else cfg.integrator.t_max
    # no step cap, so both sizes share one time grid
    integrator = replace(cfg.integrator, t_max=T, step_fraction=None, observer_stride=1, keep_states=True)
    rows = []
    for N in settings.ladder:
        row = truncation_difference(cfg, N, weight, integrator)
        logger.info(f"N={N} vs {row.N_ref}: sup weighted difference {row.sup_difference:.3e}")
        rows.append(row)
    return rows


def run_truncation_experiment(cfg: ExperimentConfig, out_dir: Path) -> List[TruncationRow]:
    """
    Truncation convergence over the configured ladder.

    Writes truncation.csv (N, N_ref, sup_difference, final_difference) and truncate.json.

    Raises:
        HypothesisError: the weighted regime is not dissipative
    """
    logging.info("-" * 20)
    logging.info(f"truncate: {cfg.label}, ladder {list(cfg.truncation.ladder)}")
    rows = truncation_rows(cfg)
    sups = [row.sup_difference for row in rows]
    decreasing = all(b < a for a, b in zip(sups, sups[1:]))
    if not decreasing:
        logger.warning(f"Truncation differences not strictly decreasing: {sups}")
    write_csv(out_dir / "truncation.csv", ("N", "N_ref", "sup_difference", "final_difference"),
              (row.values() for row in rows))
    write_json_file(out_dir / "truncate.json", {
        "provenance": cfg.provenance("truncate"),
        "sup_differences": sups,
        "strictly_decreasing": decreasing,
    })
    return rows


def run_bounds(cfg: ExperimentConfig, out_dir: Path) -> BoundEvaluation:
    """Evaluate every applicable bound for the configured datum without integrating; writes bounds.json."""
    logging.info("-" * 20)
    logging.info(f"bounds: {cfg.label}")
    result = evaluate_bounds(cfg)
    write_json_file(out_dir / "bounds.json", {
        "provenance": cfg.provenance("bounds"),
        "bounds": result.to_dict(),
    })
    return result
