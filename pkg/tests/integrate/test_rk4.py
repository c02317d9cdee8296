"""
Tests for the RK4 integrator.

Tests single steps, blow-up detection, step refinement, observation and the
conserved-drift measure.
"""

import logging
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from lattice import LatticeGeometry, LatticeState, NonFiniteInputError
from integrate import BlowUpReport, IntegratorConfig, StepController, conserved_drift, integrate, rk4_step
from models import GAUGE, DCGLParams, Nonlinearity, make_rhs


def identity(t, a):
    return a


def square(t, a):
    return a * a


def scalar(value) -> LatticeState:
    return LatticeState.from_values([value])


@pytest.mark.unit
class TestIntegratorConfig:
    """Test validation of the integrator settings."""

    def test_defaults(self):
        cfg = IntegratorConfig()
        assert cfg.dt == 1e-3
        assert cfg.step_fraction == 0.05

    @pytest.mark.parametrize("kwargs", [
        {"dt": 0.0},
        {"t_max": -1.0},
        {"dt": 1e-3, "dt_min": 1e-2},
        {"blowup_threshold": 1.0},
        {"refine_factor": 1},
        {"refine_factor": 2.5},
        {"observer_stride": 0},
        {"growth_guard": 1.0},
        {"step_fraction": 0.0},
        {"report_thresholds": (1e4, 0.5)},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            IntegratorConfig(**kwargs)

    def test_tracked_thresholds(self):
        assert IntegratorConfig().tracked_thresholds() == (1e4, 1e6)
        assert IntegratorConfig(blowup_threshold=1e8).tracked_thresholds() == (1e4, 1e6, 1e8)
        assert IntegratorConfig(blowup_threshold=5e3, report_thresholds=()).tracked_thresholds() == (5e3,)


@pytest.mark.unit
class TestStepController:
    """Test refinement and regrowth of the step size."""

    def test_refine_and_accept(self):
        controller = StepController(IntegratorConfig(dt=0.1, dt_min=0.01))
        assert controller.propose(math.inf) == 0.1
        assert controller.refine(0.1) == pytest.approx(0.05)
        controller.accept()
        assert controller.step == pytest.approx(0.1)
        controller.accept()
        assert controller.step == pytest.approx(0.1)

    def test_floor(self):
        controller = StepController(IntegratorConfig(dt=0.1, dt_min=0.04))
        assert controller.refine(0.05) == pytest.approx(0.04)
        assert controller.at_minimum(0.04)
        assert controller.propose(1e-9) == pytest.approx(0.04)


@pytest.mark.unit
class TestRK4Step:
    """Test a single classical RK4 step."""

    def test_exponential_step(self):
        """u' = u, dt = 0.1: 1 + 0.1 + 0.005 + 0.1^3/6 + 0.1^4/24."""
        result = rk4_step(scalar(1.0), identity, 0.1)
        assert result.at(0) == pytest.approx(1.1051708333333333, rel=1e-15)
        assert result.time == pytest.approx(0.1)

    def test_time_dependent(self):
        """u' = 1 integrates exactly."""
        result = rk4_step(scalar(2.0), lambda t, a: np.ones_like(a), 0.25)
        assert result.at(0) == pytest.approx(2.25)

    def test_non_finite_stage(self):
        result = rk4_step(scalar(1.0), lambda t, a: a * np.nan, 0.1)
        assert result.blown_up
        assert result.time == 0.0

    def test_rejects_blown_up_state(self):
        state = LatticeState(LatticeGeometry(0), [np.inf], blown_up=True)
        with pytest.raises(NonFiniteInputError):
            rk4_step(state, identity, 0.1)

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(ValueError):
            rk4_step(scalar(1.0), identity, 0.0)


@pytest.mark.integration
class TestIntegrate:
    """Test whole runs."""

    def test_quadratic_blowup(self):
        """u' = u^2 from 1 blows up at t = 1."""
        trajectory, report = integrate(scalar(1.0), square, IntegratorConfig(t_max=2.0))
        assert report.blew_up
        assert not report.low_confidence
        assert 0.98 <= report.t_sim <= 1.0
        assert report.final_norm >= 1e6
        assert report.dt_at_crossing > 0
        assert trajectory.norm_inf[-1] >= 1e6

    def test_threshold_ordering(self):
        """A higher threshold is crossed later, closer to the true blow-up time."""
        times = []
        for threshold in (1e4, 1e6, 1e8):
            _, report = integrate(scalar(1.0), square, IntegratorConfig(t_max=2.0, blowup_threshold=threshold))
            assert report.blew_up
            times.append(report.t_sim)
        assert times[0] < times[1] < times[2] <= 1.0
        assert times[2] - times[1] < times[1] - times[0]

    def test_crossing_times_in_one_run(self):
        """One run to 1e8 records the 1e4 and 1e6 crossings on the way, as separate runs would."""
        _, report = integrate(scalar(1.0), square, IntegratorConfig(t_max=2.0, blowup_threshold=1e8))
        crossings = report.t_sim_by_threshold
        assert list(crossings) == ["10000", "1e+06", "1e+08"]
        assert crossings["10000"] < crossings["1e+06"] < crossings["1e+08"] <= 1.0
        assert crossings["1e+08"] == report.t_sim

        _, lower = integrate(scalar(1.0), square, IntegratorConfig(t_max=2.0, blowup_threshold=1e6))
        assert crossings["1e+06"] == lower.t_sim
        assert report.to_dict()["t_sim_by_threshold"] == crossings

    def test_no_crossings_below_thresholds(self):
        _, report = integrate(scalar(1.0), identity, IntegratorConfig(dt=0.01, t_max=1.0, step_fraction=None))
        assert report.t_sim_by_threshold == {}

    def test_guard_violation_at_step_floor(self, caplog):
        """u' = 1e5 u grows about 644-fold per step even at dt_min = 1e-4."""
        cfg = IntegratorConfig(dt=1e-3, dt_min=1e-4, t_max=1e-3, step_fraction=None, blowup_threshold=1e300)
        with caplog.at_level(logging.WARNING, logger="integrate.rk4"):
            trajectory, report = integrate(scalar(1.0), lambda t, a: 1e5 * a, cfg)
        assert not report.blew_up
        assert report.guard_violations >= 5
        assert report.low_confidence
        assert report.to_dict()["guard_violations"] == report.guard_violations
        norms = np.asarray(trajectory.norm_inf)
        assert np.max(norms[1:] / norms[:-1]) > 10.0
        assert any("Growth guard exceeded at dt_min" in record.getMessage() for record in caplog.records)

    def test_guard_respected_above_floor(self):
        cfg = IntegratorConfig(dt=0.1, t_max=0.1, step_fraction=None, blowup_threshold=1e30)
        _, report = integrate(scalar(1.0), lambda t, a: 100.0 * a, cfg)
        assert report.guard_violations == 0
        assert not report.low_confidence

    def test_zero_data_stays_zero(self):
        params = DCGLParams(lambda_=1.0, alpha=0.5, k=1.0, beta=1.0, gamma=0.3)
        zero = LatticeState.zeros(LatticeGeometry(5))
        trajectory, report = integrate(zero, make_rhs(params, Nonlinearity(GAUGE, p=3)), IntegratorConfig(t_max=1.0))
        assert not report.blew_up
        assert report.t_sim is None
        assert report.t_final == pytest.approx(1.0)
        assert not np.any(trajectory.final_state.amplitudes)

    def test_reaches_t_max(self):
        trajectory, report = integrate(scalar(1.0), identity, IntegratorConfig(dt=0.01, t_max=1.0, step_fraction=None))
        assert not report.blew_up
        assert trajectory.times[-1] == pytest.approx(1.0)
        assert trajectory.final_state.at(0) == pytest.approx(math.e, rel=1e-9)

    def test_observer_stride(self):
        cfg = IntegratorConfig(dt=0.01, t_max=1.0, step_fraction=None, observer_stride=10)
        trajectory, report = integrate(scalar(1.0), identity, cfg, {"time": lambda s: s.time})
        assert report.steps == 100
        assert len(trajectory) == 11
        assert trajectory.series("time")[0] == 0.0

    def test_growth_guard_refines(self):
        """u' = 100 u with dt = 0.1: steps are halved until one step grows at most tenfold."""
        cfg = IntegratorConfig(dt=0.1, t_max=0.1, step_fraction=None, blowup_threshold=1e30)
        trajectory, report = integrate(scalar(1.0), lambda t, a: 100.0 * a, cfg)
        assert report.refinements >= 3
        assert not report.blew_up
        norms = np.asarray(trajectory.norm_inf)
        assert np.all(norms[1:] / norms[:-1] <= 10.0)
        assert trajectory.final_state.at(0).real == pytest.approx(math.exp(10.0), rel=0.05)

    def test_non_finite_derivative_is_low_confidence(self):
        """A derivative that turns non-finite at t = 0.5 ends the run there."""
        def breaks(t, a):
            return a if t < 0.5 else a * np.nan

        _, report = integrate(scalar(1.0), breaks, IntegratorConfig(t_max=1.0))
        assert report.blew_up
        assert report.low_confidence
        assert report.final_norm == math.inf
        assert 0.49 < report.t_sim <= 0.5

    def test_initial_state_above_threshold(self):
        _, report = integrate(scalar(1e7), identity, IntegratorConfig())
        assert report.blew_up
        assert report.t_sim == 0.0
        assert report.t_sim_by_threshold == {"10000": 0.0, "1e+06": 0.0}

    def test_rejects_non_finite_initial_state(self):
        state = LatticeState(LatticeGeometry(0), [np.nan], blown_up=True)
        with pytest.raises(NonFiniteInputError):
            integrate(state, identity, IntegratorConfig())

    def test_deterministic(self):
        params = DCGLParams(lambda_=0.1, alpha=0.1, k=1.0, beta=1.0)
        rhs = make_rhs(params, Nonlinearity(GAUGE, p=3))
        state = LatticeState.from_values([0.5, 1.0 + 0.5j, 0.5])
        cfg = IntegratorConfig(t_max=3.0)
        first = integrate(state, rhs, cfg)
        second = integrate(state, rhs, cfg)
        assert first[0].times == second[0].times
        assert np.array_equal(first[0].final_state.amplitudes, second[0].final_state.amplitudes)
        assert first[1] == second[1]

    def test_keep_states(self):
        cfg = IntegratorConfig(dt=0.1, t_max=0.5, step_fraction=None, keep_states=True)
        trajectory, _ = integrate(scalar(1.0), identity, cfg)
        assert len(trajectory.states) == len(trajectory)
        assert trajectory.states[-1].time == pytest.approx(0.5)


@pytest.mark.unit
class TestBlowUpReport:
    """Test the bound comparison of a report."""

    def report(self, **kwargs) -> BlowUpReport:
        values = dict(blew_up=True, t_sim=0.5, threshold=1e6, final_norm=1e6, refinements=0)
        values.update(kwargs)
        return BlowUpReport(**values)

    def test_within_bound(self):
        assert self.report().with_bound(1.0, True).within_bound is True
        assert self.report().with_bound(0.4, True).within_bound is False

    def test_not_applicable(self):
        assert self.report().with_bound(1.0, False).within_bound is None
        assert self.report(blew_up=False, t_sim=None).with_bound(1.0, True).within_bound is None

    def test_to_dict(self):
        data = self.report().with_bound(1.0, True).to_dict()
        assert data["bound_t_star"] == 1.0
        assert data["within_bound"] is True


@pytest.mark.unit
class TestConservedDrift:
    """Test the relative drift of an observed functional."""

    def test_constant(self):
        trajectory, _ = integrate(scalar(1.0), lambda t, a: np.zeros_like(a),
                                  IntegratorConfig(dt=0.1, t_max=1.0), {"q": lambda s: 3.0})
        assert conserved_drift(trajectory, "q") == 0.0

    def test_linear_growth(self):
        """Q(t) = 1 + t over [0, 2] drifts by 2."""
        trajectory, _ = integrate(scalar(1.0), lambda t, a: np.zeros_like(a),
                                  IntegratorConfig(dt=0.1, t_max=2.0), {"q": lambda s: 1.0 + s.time})
        assert conserved_drift(trajectory, "q") == pytest.approx(2.0)

    def test_norm_series(self):
        trajectory, _ = integrate(scalar(1.0), lambda t, a: np.zeros_like(a), IntegratorConfig(dt=0.1, t_max=1.0))
        assert conserved_drift(trajectory, "norm2") == 0.0

    def test_unknown_functional(self):
        trajectory, _ = integrate(scalar(1.0), identity, IntegratorConfig(dt=0.1, t_max=0.2))
        with pytest.raises(KeyError):
            conserved_drift(trajectory, "energy")
