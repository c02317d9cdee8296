"""
Tests for experiment config parsing.

Tests key resolution and defaults, line-numbered errors, preset consistency,
sweep validation and loading of the shipped config files.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from lattice import ConfigError, norm_p
from integrate import IntegratorConfig
from models import GAUGE, LHS, NON_GAUGE, SOURCE
from experiments import (
    DCGL,
    DNLS,
    experiment_from_text,
    load_experiment_config,
    load_sweep_config,
    parse_experiment_config,
    sweep_from_text,
)
from utils import parse_config_text

CONFIG_DIR = Path(__file__).parent.parent.parent / "configs"

NONGAUGE_TEXT = """\
# non-gauge test equation
nonlinearity = non-gauge
p = 3
lambda = 0.1
alpha = 0.1
beta = 1
N = 5
"""


@pytest.mark.unit
class TestExperimentDefaults:
    """Test the resolved defaults of a minimal config."""

    def test_minimal(self):
        cfg = experiment_from_text("lambda = 1\nk = 1\n")
        assert cfg.preset == DCGL
        assert cfg.convention == SOURCE
        assert cfg.nonlinearity.kind == GAUGE
        assert cfg.p == 3.0
        assert cfg.N == 10
        assert cfg.sigma == 1.0
        assert cfg.integrator == IntegratorConfig()
        assert cfg.mu is None

    def test_values(self):
        cfg = experiment_from_text(NONGAUGE_TEXT)
        assert cfg.nonlinearity.kind == NON_GAUGE
        assert cfg.params.beta == 1.0
        assert cfg.params.lambda_ == 0.1
        assert cfg.N == 5
        assert cfg.source_text == NONGAUGE_TEXT

    def test_sigma_from_delta_and_override(self):
        assert experiment_from_text("delta = 0.5\n").sigma == pytest.approx(1.5)
        assert experiment_from_text("delta = 0.5\nsigma = 0\n").sigma == 0.0

    def test_integrator_keys(self):
        cfg = experiment_from_text("dt = 1e-2\nt_max = 3\nstep_fraction = none\nobserver_stride = 5\n")
        assert cfg.integrator.dt == 1e-2
        assert cfg.integrator.t_max == 3.0
        assert cfg.integrator.step_fraction is None
        assert cfg.integrator.observer_stride == 5

    def test_integrator_defaults_from_caller(self):
        defaults = IntegratorConfig(dt=5e-3, blowup_threshold=1e8)
        cfg = parse_experiment_config(parse_config_text("t_max = 2\n"), defaults=defaults)
        assert cfg.integrator.dt == 5e-3
        assert cfg.integrator.blowup_threshold == 1e8
        assert cfg.integrator.t_max == 2.0

    def test_seed_override(self):
        assert experiment_from_text("seed = 4\n").seed == 4
        assert experiment_from_text("seed = 4\n", seed=9).seed == 9


@pytest.mark.unit
class TestConfigErrors:
    """Test that bad configs raise ConfigError with the offending line."""

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as exc:
            experiment_from_text("lambda = 1\nlambda_ = 2\n")
        assert exc.value.line == 2

    def test_bad_number(self):
        with pytest.raises(ConfigError) as exc:
            experiment_from_text("N = 4\np = three\n")
        assert exc.value.line == 2
        assert "line 2" in str(exc.value)

    def test_non_finite_number(self):
        with pytest.raises(ConfigError):
            experiment_from_text("gamma = nan\n")

    def test_bad_choice(self):
        with pytest.raises(ConfigError) as exc:
            experiment_from_text("convention = rhs\n")
        assert exc.value.line == 1

    def test_unknown_section(self):
        with pytest.raises(ConfigError) as exc:
            experiment_from_text("lambda = 1\n\n[plot]\nwidth = 3\n")
        assert exc.value.line == 3

    def test_general_f(self):
        with pytest.raises(ConfigError):
            experiment_from_text("nonlinearity = general-f\n")

    def test_negative_lambda(self):
        with pytest.raises(ConfigError):
            experiment_from_text("lambda = -1\n")

    def test_bad_integrator(self):
        with pytest.raises(ConfigError):
            experiment_from_text("dt = 1e-3\ndt_min = 1\n")

    @pytest.mark.parametrize("text", [
        "N = -1\n",
        "initial_norm = 0\n",
        "mu = -0.5\n",
        "epsilon = 0\n",
        "kind = gaussian\n",
        "geometry = periodic\n",
    ])
    def test_invalid_root_values(self, text):
        with pytest.raises(ConfigError):
            experiment_from_text(text)

    @pytest.mark.parametrize("text", [
        "preset = drgl\nlambda = 1\nk = 1\nalpha = 1\n",
        "preset = drgl\nnonlinearity = non-gauge\nlambda = 1\nk = 1\n",
        "preset = dnls\nalpha = 1\nbeta = 1\nlambda = 1\n",
        "preset = dnls\nalpha = 1\nbeta = 1\nnonlinearity = non-gauge\n",
    ])
    def test_inconsistent_preset(self, text):
        with pytest.raises(ConfigError):
            experiment_from_text(text)

    def test_attractor_section(self):
        with pytest.raises(ConfigError) as exc:
            experiment_from_text("k = -1\n[attractor]\nmode = finite\nrho1_factor = 0.9\n")
        assert exc.value.line == 4
        with pytest.raises(ConfigError):
            experiment_from_text("k = -1\n[attractor]\nmode = spectral\n")
        with pytest.raises(ConfigError):
            experiment_from_text("k = -1\n[attractor]\nradius = 2\n")

    def test_truncation_ladder(self):
        with pytest.raises(ConfigError):
            experiment_from_text("[truncate]\nladder = 20, 10\n")
        with pytest.raises(ConfigError):
            experiment_from_text("[truncate]\nladder = 10, 20.5\n")


@pytest.mark.unit
class TestDerivedSettings:
    """Test the helpers that derive states and parameters from a config."""

    def test_effective_params(self):
        source = experiment_from_text("k = 1\nbeta = 2\n")
        lhs = experiment_from_text("convention = lhs\nk = 1\nbeta = 2\n")
        assert (source.effective_params().k, source.effective_params().beta) == (1.0, 2.0)
        assert (lhs.effective_params().k, lhs.effective_params().beta) == (-1.0, -2.0)
        assert (source.lhs_params().k, source.lhs_params().beta) == (-1.0, -2.0)
        assert lhs.lhs_params().k == 1.0
        assert lhs.convention == LHS

    def test_initial_norm(self):
        cfg = experiment_from_text("kind = random-phase\ninitial_norm = 2.5\nN = 7\nseed = 3\n")
        assert norm_p(cfg.initial_state(), 2) == pytest.approx(2.5)

    def test_initial_state_on_other_lattice(self):
        cfg = experiment_from_text("N = 3\n")
        assert cfg.initial_state(8).geometry.N == 8

    def test_zero_data_ignores_initial_norm(self):
        cfg = experiment_from_text("kind = zero\ninitial_norm = 1\n")
        assert not np.any(cfg.initial_state().amplitudes)

    def test_forcing(self):
        assert experiment_from_text("N = 2\n").forcing_state() is None
        cfg = experiment_from_text("N = 2\nforcing_amplitude = 0.1\nforcing_decay = 1\n")
        forcing = cfg.forcing_state()
        assert forcing.at(0) == pytest.approx(0.1)
        assert forcing.at(-2) == pytest.approx(0.1 * np.exp(-2.0))
        assert cfg.equation_params().forcing is not None

    def test_weighted_epsilon(self):
        assert experiment_from_text("lambda = 0.1\n").weighted_epsilon() == pytest.approx(0.2)
        assert experiment_from_text("lambda = 0.1\nepsilon = 0.05\n").weighted_epsilon() == 0.05
        with pytest.raises(ConfigError):
            experiment_from_text("alpha = 1\n").weighted_epsilon()

    def test_with_value(self):
        cfg = experiment_from_text(NONGAUGE_TEXT)
        assert cfg.with_value("N", 20.0).N == 20
        assert cfg.with_value("gamma", -0.5).params.gamma == -0.5
        assert cfg.with_value("p", 2.0).p == 2.0
        assert cfg.with_value("mu", 0.3).mu == 0.3
        with pytest.raises(ConfigError):
            cfg.with_value("N", 2.5)
        with pytest.raises(ConfigError):
            cfg.with_value("lambda", 1.0)

    def test_provenance(self):
        cfg = experiment_from_text(NONGAUGE_TEXT, seed=5)
        provenance = cfg.provenance("simulate")
        assert provenance["command"] == "simulate"
        assert provenance["seed"] == 5
        assert provenance["config_text"] == NONGAUGE_TEXT
        assert set(provenance["versions"]) == {"numpy", "scipy", "numba"}


@pytest.mark.unit
class TestSweepConfig:
    """Test the [sweep] section."""

    def test_cells(self):
        sweep = sweep_from_text(NONGAUGE_TEXT + "\n[sweep]\naxis = gamma\nvalues = -0.5, 0, 0.5\n")
        assert sweep.axis == "gamma"
        assert sweep.values == (-0.5, 0.0, 0.5)
        cells = sweep.cells()
        assert [index for index, _, _ in cells] == [0, 1, 2]
        assert [cfg.params.gamma for _, _, cfg in cells] == [-0.5, 0.0, 0.5]
        assert sweep.output == "results.csv"

    def test_decreasing_values(self):
        sweep = sweep_from_text(NONGAUGE_TEXT + "[sweep]\naxis = N\nvalues = 40, 20, 10\n")
        assert [cfg.N for _, _, cfg in sweep.cells()] == [40, 20, 10]

    def test_not_monotone(self):
        with pytest.raises(ConfigError) as exc:
            sweep_from_text(NONGAUGE_TEXT + "[sweep]\naxis = N\nvalues = 10, 40, 20\n")
        assert exc.value.line == 10

    def test_invalid_value(self):
        with pytest.raises(ConfigError):
            sweep_from_text(NONGAUGE_TEXT + "[sweep]\naxis = p\nvalues = 0.5, 2\n")

    def test_missing_section(self):
        with pytest.raises(ConfigError):
            sweep_from_text(NONGAUGE_TEXT)

    def test_missing_values(self):
        with pytest.raises(ConfigError):
            sweep_from_text(NONGAUGE_TEXT + "[sweep]\naxis = N\n")

    def test_unknown_axis(self):
        with pytest.raises(ConfigError):
            sweep_from_text(NONGAUGE_TEXT + "[sweep]\naxis = lambda\nvalues = 1, 2\n")

    def test_mu_axis_needs_gauge(self):
        with pytest.raises(ConfigError) as exc:
            sweep_from_text(NONGAUGE_TEXT + "[sweep]\naxis = mu\nvalues = 0.1, 0.5\n")
        assert "gauge" in str(exc.value)
        gauge = NONGAUGE_TEXT.replace("non-gauge", "gauge").replace("beta = 1", "k = 1\nconvention = lhs")
        sweep = sweep_from_text(gauge + "[sweep]\naxis = mu\nvalues = 0.1, 0.5\n")
        assert [cfg.mu for _, _, cfg in sweep.cells()] == [0.1, 0.5]


@pytest.mark.filesystem
class TestConfigFiles:
    """Test loading configs from disk."""

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(NONGAUGE_TEXT, encoding="utf-8")
        cfg = load_experiment_config(path, seed=2)
        assert cfg.N == 5
        assert cfg.seed == 2
        assert cfg.source_text == NONGAUGE_TEXT

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_experiment_config(tmp_path / "missing.cfg")

    @pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.cfg")), ids=lambda p: p.stem)
    def test_shipped_configs(self, path):
        if "[sweep]" in path.read_text(encoding="utf-8"):
            sweep = load_sweep_config(path)
            assert len(sweep.cells()) == len(sweep.values)
        else:
            cfg = load_experiment_config(path)
            assert cfg.label == path.stem.replace("_", "-")

    def test_dnls_config(self):
        cfg = load_experiment_config(CONFIG_DIR / "dnls_conservation.cfg")
        assert cfg.preset == DNLS
        assert cfg.initial_norm == 1.0
