"""
Tests for the closed-form blow-up bounds.
"""

import math
import sys
from pathlib import Path

import pytest

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from lattice import HypothesisError, LatticeGeometry, LatticeState
from models import DCGLParams
from diagnostics import (
    IMAG_BETA,
    REAL_K,
    BoundInput,
    bound_gauge_drgl,
    bound_nongauge,
    dissipation_window,
    dnls_sobolev_bound,
    sobolev_norm_sq,
)


def bound_input(L: int = 21, m0: float = 1.0, p: float = 3.0, sigma: float = 1.0, **params) -> BoundInput:
    return BoundInput(params=DCGLParams(**params), p=p, sigma=sigma, L=L, m0=m0)


@pytest.mark.unit
class TestBoundInput:
    """Test validation of the bound inputs."""

    def test_nonpositive_functional(self):
        with pytest.raises(HypothesisError) as exc:
            bound_input(m0=0.0, beta=1.0)
        assert exc.value.term == "M0"

    def test_invalid_exponent(self):
        with pytest.raises(ValueError):
            bound_input(p=1.0, beta=1.0)

    def test_size_factor(self):
        """sigma = 1 removes the lattice size."""
        assert bound_input(L=101, sigma=1.0).size_factor == 1.0
        assert bound_input(L=4, p=3.0, sigma=0.0).size_factor == pytest.approx(16.0)


@pytest.mark.unit
class TestNonGaugeBound:
    """Test the non-gauge blow-up bound."""

    def test_undamped(self):
        """gamma = 0, p = 3, beta = 1, sigma = 1, M0 = 1: T* = 1/2 for any L."""
        for L in (1, 21, 201):
            estimate = bound_nongauge(bound_input(L=L, beta=1.0), IMAG_BETA)
            assert estimate.valid
            assert estimate.t_star == pytest.approx(0.5)

    def test_linear_growth(self):
        """gamma = 1, p = 2: T* = ln 2."""
        estimate = bound_nongauge(bound_input(p=2.0, beta=1.0, gamma=1.0))
        assert estimate.t_star == pytest.approx(math.log(2.0))

    def test_strong_damping_invalid(self):
        estimate = bound_nongauge(bound_input(beta=1.0, gamma=-5.0))
        assert not estimate.valid
        assert estimate.t_star is None

    def test_real_case(self):
        imag = bound_nongauge(bound_input(p=2.5, beta=2.0, gamma=0.3), IMAG_BETA)
        real = bound_nongauge(bound_input(p=2.5, k=2.0, gamma=0.3), REAL_K)
        assert real.t_star == pytest.approx(imag.t_star)

    @pytest.mark.parametrize("case,params,term", [
        (IMAG_BETA, {"beta": 0.0}, "beta"),
        (IMAG_BETA, {"beta": -1.0}, "beta"),
        (REAL_K, {"k": -1.0}, "k"),
    ])
    def test_hypothesis(self, case, params, term):
        with pytest.raises(HypothesisError) as exc:
            bound_nongauge(bound_input(**params), case)
        assert exc.value.term == term

    def test_unknown_case(self):
        with pytest.raises(ValueError):
            bound_nongauge(bound_input(beta=1.0), "complex")

    @pytest.mark.parametrize("gamma", [1e-8, -1e-8])
    @pytest.mark.parametrize("p", [2.0, 3.0])
    def test_continuity_at_zero_damping(self, gamma, p):
        undamped = bound_nongauge(bound_input(p=p, beta=0.7, sigma=0.5, m0=1.3)).t_star
        damped = bound_nongauge(bound_input(p=p, beta=0.7, sigma=0.5, m0=1.3, gamma=gamma)).t_star
        assert abs(damped - undamped) / undamped < 1e-6

    def test_decreasing_in_initial_functional(self):
        values = [bound_nongauge(bound_input(m0=m0, beta=1.0, gamma=0.5)).t_star for m0 in (0.5, 1.0, 2.0)]
        assert values[0] > values[1] > values[2]

    def test_dissipation_window(self):
        """Damping inside the window keeps the bound valid, beyond it does not."""
        lower, upper = dissipation_window(bound_input(beta=1.0, m0=2.0))
        assert lower == 0.0
        assert upper == pytest.approx(4.0)
        assert bound_nongauge(bound_input(beta=1.0, m0=2.0, gamma=-0.99 * upper)).valid
        assert not bound_nongauge(bound_input(beta=1.0, m0=2.0, gamma=-1.01 * upper)).valid


@pytest.mark.unit
class TestGaugeBound:
    """Test the gauge DRGL bound."""

    def test_unit_case(self):
        """p = 3, k = 1, sigma = 1, M0 = 1: 4 / (1 * 4)."""
        assert bound_gauge_drgl(bound_input(k=1.0)) == pytest.approx(1.0)

    def test_scales_with_k(self):
        assert bound_gauge_drgl(bound_input(k=2.0)) == pytest.approx(0.5)
        assert bound_gauge_drgl(bound_input(k=1.0), k=4.0) == pytest.approx(0.25)

    def test_explicit_mass(self):
        """M0^{(p-1)/2} = M0 for p = 3."""
        assert bound_gauge_drgl(bound_input(k=1.0), M0=2.0) == pytest.approx(0.5)

    def test_hypothesis(self):
        with pytest.raises(HypothesisError) as exc:
            bound_gauge_drgl(bound_input(k=0.0))
        assert exc.value.term == "k"
        with pytest.raises(HypothesisError):
            bound_gauge_drgl(bound_input(k=1.0), M0=-1.0)


@pytest.mark.unit
class TestDNLSBound:
    """Test the a-priori l^2_1 bound of the DNLS."""

    def test_zero_state(self):
        assert dnls_sobolev_bound(LatticeState.zeros(LatticeGeometry(3)), 1.0, 1.0, 3.0) == 0.0

    def test_defocusing_adds_nothing_positive(self):
        state = LatticeState.from_values([0.5, 1.0, 0.5j])
        assert dnls_sobolev_bound(state, 1.0, -1.0, 3.0) < sobolev_norm_sq(state)

    def test_formula(self):
        state = LatticeState.from_values([0, 1, 0])
        # ||u||^2_{l^2_1} = 3, ||u||_2 = 1
        assert dnls_sobolev_bound(state, 2.0, 1.0, 3.0) == pytest.approx(3.0 + 4.0 / 8.0)

    def test_hypothesis(self):
        with pytest.raises(HypothesisError):
            dnls_sobolev_bound(LatticeState.from_values([1]), 0.0, 1.0, 3.0)
