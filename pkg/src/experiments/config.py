"""
Experiment configuration.

Experiments are described by line-based ``key = value`` files (see
utils.load_config_file). Root keys fix the equation, the initial datum and the
integrator; the optional ``[sweep]``, ``[attractor]`` and ``[truncate]``
sections configure the corresponding subcommands. Every value error is reported
as a ConfigError carrying the line it came from.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numba
import numpy as np
import scipy

from lattice import (
    FINITE_DIRICHLET,
    IMAGINARY_POSITIVE,
    INITIAL_DATA_KINDS,
    ConfigError,
    LatticeGeometry,
    LatticeState,
    ScalingProfile,
    make_initial_data,
    rescale_to_norm,
)
from lattice.core import GEOMETRY_KINDS
from integrate import IntegratorConfig
from models import GAUGE, GENERAL_F, NON_GAUGE, SIGN_CONVENTIONS, SOURCE, DCGLParams, Nonlinearity
from utils import ROOT_SECTION, ConfigSection, load_config_file, parse_config_text

logger = logging.getLogger(__name__)

DCGL = "dcgl"
DRGL = "drgl"
DNLS = "dnls"
PRESETS = (DCGL, DRGL, DNLS)

SWEEP_AXES = ("N", "gamma", "p", "beta", "k", "mu")
ATTRACTOR_MODES = ("finite", "weighted")

SWEEP_SECTION = "sweep"
ATTRACTOR_SECTION = "attractor"
TRUNCATE_SECTION = "truncate"

ROOT_KEYS = (
    "preset", "convention", "nonlinearity", "p", "c",
    "lambda", "alpha", "k", "beta", "gamma",
    "N", "geometry", "kind", "delta", "amplitude", "phase", "localization", "support",
    "initial_norm", "forcing_amplitude", "forcing_decay",
    "sigma", "mu", "epsilon", "seed", "label",
    "dt", "t_max", "blowup_threshold", "dt_min", "refine_factor",
    "observer_stride", "growth_guard", "step_fraction",
)
SECTION_KEYS = {
    SWEEP_SECTION: ("axis", "values", "output"),
    ATTRACTOR_SECTION: ("mode", "rho1", "rho1_factor", "initial_norms", "eta", "tail_M", "checkpoints"),
    TRUNCATE_SECTION: ("ladder", "T"),
}


class _Reader:
    """Typed access to one config section with line-numbered errors."""

    def __init__(self, section: ConfigSection):
        self.section = section

    def fail(self, key: str, message: str):
        raise ConfigError(message, line=self.section.line_of(key))

    def _convert(self, key: str, convert: Callable[[str], object], kind: str):
        raw = self.section[key]
        try:
            return convert(raw)
        except ValueError:
            self.fail(key, f"{key} = {raw!r} is not a valid {kind}")

    def text(self, key: str, default: Optional[str] = None, choices: Tuple[str, ...] = ()) -> Optional[str]:
        if key not in self.section:
            return default
        value = self.section[key]
        if choices and value not in choices:
            self.fail(key, f"{key} = {value!r}; expected one of {choices}")
        return value

    def number(self, key: str, default: Optional[float] = None) -> Optional[float]:
        if key not in self.section:
            return default
        value = self._convert(key, float, "number")
        if not math.isfinite(value):
            self.fail(key, f"{key} must be finite, got {value}")
        return value

    def integer(self, key: str, default: Optional[int] = None) -> Optional[int]:
        if key not in self.section:
            return default
        return self._convert(key, int, "integer")

    def optional_number(self, key: str, default: Optional[float]) -> Optional[float]:
        """A number, or None when the value reads 'none'."""
        if key in self.section and self.section[key].lower() == "none":
            return None
        return self.number(key, default)

    def numbers(self, key: str, default: Optional[List[float]] = None) -> Optional[List[float]]:
        if key not in self.section:
            return default
        items = [item.strip() for item in self.section[key].split(",") if item.strip()]
        if not items:
            self.fail(key, f"{key} needs at least one value")
        return [self._convert_item(key, item) for item in items]

    def _convert_item(self, key: str, item: str) -> float:
        try:
            value = float(item)
        except ValueError:
            self.fail(key, f"{key}: {item!r} is not a valid number")
        if not math.isfinite(value):
            self.fail(key, f"{key}: values must be finite, got {item!r}")
        return value

    def check_known(self, allowed: Tuple[str, ...]):
        for key in self.section:
            if key not in allowed:
                where = f"[{self.section.name}]" if self.section.name else "the root section"
                self.fail(key, f"Unknown key {key!r} in {where}")


@dataclass(frozen=True)
class AttractorSettings:
    mode: str = "finite"
    rho1: Optional[float] = None
    rho1_factor: float = 1.1
    initial_norms: Tuple[float, ...] = (10.0, 1e3, 1e6)
    eta: Optional[float] = None
    tail_M: int = 5
    checkpoints: Tuple[float, ...] = ()


@dataclass(frozen=True)
class TruncationSettings:
    ladder: Tuple[int, ...] = (10, 20, 40)
    T: Optional[float] = None


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One fully resolved experiment: equation, datum, integrator and section settings.

    ``sigma`` defaults to the scaling exponent of the profile (1 + delta) and is
    the exponent used by the L^-sigma functionals and the bounds.
    """

    preset: str
    convention: str
    nonlinearity: Nonlinearity
    params: DCGLParams
    N: int
    geometry_kind: str = FINITE_DIRICHLET
    kind: str = IMAGINARY_POSITIVE
    profile: ScalingProfile = field(default_factory=ScalingProfile)
    initial_norm: Optional[float] = None
    forcing_amplitude: float = 0.0
    forcing_decay: float = 1.0
    sigma_override: Optional[float] = None
    mu: Optional[float] = None
    epsilon: Optional[float] = None
    seed: int = 0
    label: str = "experiment"
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    attractor: AttractorSettings = field(default_factory=AttractorSettings)
    truncation: TruncationSettings = field(default_factory=TruncationSettings)
    source_text: str = field(default="", compare=False, repr=False)

    @property
    def sigma(self) -> float:
        return self.profile.sigma if self.sigma_override is None else self.sigma_override

    @property
    def p(self) -> float:
        return self.nonlinearity.p

    def geometry(self, N: Optional[int] = None) -> LatticeGeometry:
        return LatticeGeometry(self.N if N is None else N, self.geometry_kind)

    def initial_state(self, N: Optional[int] = None) -> LatticeState:
        """Initial datum on the configured (or given) lattice, rescaled to initial_norm if set."""
        state = make_initial_data(self.geometry(N), self.profile, self.kind, self.seed)
        if self.initial_norm is not None and np.any(state.amplitudes != 0):
            state = rescale_to_norm(state, self.initial_norm)
        return state

    def forcing_state(self, N: Optional[int] = None) -> Optional[LatticeState]:
        """f_n = forcing_amplitude e^{-forcing_decay |n|}, or None without forcing."""
        if self.forcing_amplitude == 0:
            return None
        geometry = self.geometry(N)
        values = self.forcing_amplitude * np.exp(-self.forcing_decay * np.abs(geometry.sites()))
        return LatticeState(geometry, values.astype(np.complex128))

    def equation_params(self, N: Optional[int] = None) -> DCGLParams:
        """DCGL parameters with the forcing resolved on the given lattice."""
        return replace(self.params, forcing=self.forcing_state(N))

    def effective_params(self) -> DCGLParams:
        """
        Parameters rewritten so the nonlinearity enters as +(k + i beta) F(u).

        The lhs convention flips the sign of k and beta.
        """
        if self.convention == SOURCE:
            return self.params
        return replace(self.params, k=-self.params.k, beta=-self.params.beta)

    def lhs_params(self) -> DCGLParams:
        """Parameters in the lhs convention, the form dcgl_to_general expects."""
        if self.convention == SOURCE:
            return replace(self.equation_params(), k=-self.params.k, beta=-self.params.beta)
        return self.equation_params()

    def weighted_epsilon(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        if self.params.lambda_ > 0:
            return 2.0 * self.params.lambda_
        raise ConfigError("epsilon must be given when lambda = 0")

    def with_value(self, axis: str, value: float) -> "ExperimentConfig":
        """Copy with one sweep axis set to ``value``."""
        if axis == "N":
            if value != int(value) or value < 0:
                raise ConfigError(f"Sweep value N={value} is not a nonnegative integer")
            return replace(self, N=int(value))
        if axis in ("gamma", "beta", "k"):
            return replace(self, params=replace(self.params, **{axis: float(value)}))
        if axis == "p":
            return replace(self, nonlinearity=replace(self.nonlinearity, p=float(value)))
        if axis == "mu":
            return replace(self, mu=float(value))
        raise ConfigError(f"Unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")

    def with_seed(self, seed: Optional[int]) -> "ExperimentConfig":
        return self if seed is None else replace(self, seed=seed)

    def provenance(self, command: str) -> Dict[str, object]:
        return {
            "command": command,
            "label": self.label,
            "config_text": self.source_text,
            "seed": self.seed,
            "growth_guard": self.integrator.growth_guard,
            "step_fraction": self.integrator.step_fraction,
            "versions": {
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "numba": numba.__version__,
            },
        }


@dataclass(frozen=True)
class SweepConfig:
    """A base experiment plus exactly one swept axis with a strictly monotone value list."""

    base: ExperimentConfig
    axis: str
    values: Tuple[float, ...]
    output: str = "results.csv"

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"Unknown sweep axis {self.axis!r}; expected one of {SWEEP_AXES}")
        if not self.values:
            raise ConfigError("Sweep values must be nonempty")
        steps = np.diff(np.asarray(self.values, dtype=float))
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise ConfigError(f"Sweep values must be strictly monotone, got {list(self.values)}")
        if self.axis == "mu" and self.base.nonlinearity.kind != GAUGE:
            raise ConfigError(
                f"A mu sweep measures the weighted absorbing ball, which needs the gauge nonlinearity; "
                f"got {self.base.nonlinearity.kind}"
            )
        for value in self.values:
            try:
                self.base.with_value(self.axis, value)
            except ValueError as e:
                raise ConfigError(f"Sweep value {self.axis}={value:g} is invalid: {e}") from e

    @property
    def preset(self) -> str:
        return self.base.preset

    @property
    def seed(self) -> int:
        return self.base.seed

    @property
    def profile(self) -> ScalingProfile:
        return self.base.profile

    @property
    def integrator(self) -> IntegratorConfig:
        return self.base.integrator

    def cells(self) -> List[Tuple[int, float, ExperimentConfig]]:
        return [(index, value, self.base.with_value(self.axis, value)) for index, value in enumerate(self.values)]


def _check_preset(preset: str, nl_kind: str, params: DCGLParams, reader: _Reader):
    if preset == DRGL:
        if params.alpha != 0 or params.beta != 0:
            reader.fail("preset", "preset drgl needs alpha = beta = 0")
        if nl_kind != GAUGE:
            reader.fail("nonlinearity", "preset drgl needs the gauge nonlinearity")
    elif preset == DNLS:
        if params.lambda_ != 0 or params.k != 0 or params.gamma != 0:
            reader.fail("preset", "preset dnls needs lambda = k = gamma = 0")
        if nl_kind != GAUGE:
            reader.fail("nonlinearity", "preset dnls needs the gauge nonlinearity")


def _integrator(root: _Reader, defaults: IntegratorConfig) -> IntegratorConfig:
    try:
        return IntegratorConfig(
            dt=root.number("dt", defaults.dt),
            t_max=root.number("t_max", defaults.t_max),
            blowup_threshold=root.number("blowup_threshold", defaults.blowup_threshold),
            dt_min=root.number("dt_min", defaults.dt_min),
            refine_factor=root.integer("refine_factor", defaults.refine_factor),
            observer_stride=root.integer("observer_stride", defaults.observer_stride),
            growth_guard=root.number("growth_guard", defaults.growth_guard),
            step_fraction=root.optional_number("step_fraction", defaults.step_fraction),
        )
    except ValueError as e:
        raise ConfigError(f"Invalid integrator settings: {e}") from e


def _attractor(section: Optional[ConfigSection]) -> AttractorSettings:
    if section is None:
        return AttractorSettings()
    reader = _Reader(section)
    reader.check_known(SECTION_KEYS[ATTRACTOR_SECTION])
    defaults = AttractorSettings()
    settings = AttractorSettings(
        mode=reader.text("mode", defaults.mode, ATTRACTOR_MODES),
        rho1=reader.number("rho1"),
        rho1_factor=reader.number("rho1_factor", defaults.rho1_factor),
        initial_norms=tuple(reader.numbers("initial_norms", list(defaults.initial_norms))),
        eta=reader.number("eta"),
        tail_M=reader.integer("tail_M", defaults.tail_M),
        checkpoints=tuple(reader.numbers("checkpoints", [])),
    )
    if not settings.rho1_factor > 1:
        reader.fail("rho1_factor", f"rho1_factor must exceed 1, got {settings.rho1_factor}")
    if any(value <= 0 for value in settings.initial_norms):
        reader.fail("initial_norms", "initial_norms must be positive")
    if settings.tail_M < 0:
        reader.fail("tail_M", f"tail_M must be nonnegative, got {settings.tail_M}")
    return settings


def _truncation(section: Optional[ConfigSection]) -> TruncationSettings:
    if section is None:
        return TruncationSettings()
    reader = _Reader(section)
    reader.check_known(SECTION_KEYS[TRUNCATE_SECTION])
    ladder = reader.numbers("ladder", [10, 20, 40])
    if any(value != int(value) or value < 1 for value in ladder):
        reader.fail("ladder", f"ladder entries must be positive integers, got {ladder}")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        reader.fail("ladder", f"ladder must be strictly increasing, got {ladder}")
    return TruncationSettings(ladder=tuple(int(value) for value in ladder), T=reader.number("T"))


def parse_experiment_config(
    sections: Dict[str, ConfigSection],
    source_text: str = "",
    defaults: Optional[IntegratorConfig] = None,
) -> ExperimentConfig:
    """
    Build an ExperimentConfig from parsed sections.

    Args:
        sections: Output of utils.parse_config_text
        source_text: Original text, kept for provenance
        defaults: Integrator defaults for keys the file leaves out

    Returns:
        The resolved configuration

    Raises:
        ConfigError: unknown key or section, bad value, or an inconsistent
            preset/nonlinearity pair
    """
    for name, section in sections.items():
        if name not in (ROOT_SECTION, *SECTION_KEYS):
            raise ConfigError(f"Unknown section [{name}]", line=section.line)

    root = _Reader(sections[ROOT_SECTION])
    root.check_known(ROOT_KEYS)

    preset = root.text("preset", DCGL, PRESETS)
    convention = root.text("convention", SOURCE, SIGN_CONVENTIONS)
    nl_kind = root.text("nonlinearity", GAUGE, (GAUGE, NON_GAUGE, GENERAL_F))
    if nl_kind == GENERAL_F:
        root.fail("nonlinearity", "general-f nonlinearities cannot be configured from a file")

    try:
        nonlinearity = Nonlinearity(kind=nl_kind, p=root.number("p", 3.0), c=root.number("c", 1.0))
        params = DCGLParams(
            lambda_=root.number("lambda", 0.0),
            alpha=root.number("alpha", 0.0),
            k=root.number("k", 0.0),
            beta=root.number("beta", 0.0),
            gamma=root.number("gamma", 0.0),
        )
        profile = ScalingProfile(
            delta=root.number("delta", 0.0),
            amplitude=root.number("amplitude", 1.0),
            phase=root.number("phase", 0.0),
            localization=root.number("localization", 1.0),
            support=root.integer("support"),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e
    _check_preset(preset, nl_kind, params, root)

    N = root.integer("N", 10)
    if N < 0:
        root.fail("N", f"N must be nonnegative, got {N}")
    initial_norm = root.number("initial_norm")
    if initial_norm is not None and not initial_norm > 0:
        root.fail("initial_norm", f"initial_norm must be positive, got {initial_norm}")
    mu = root.number("mu")
    if mu is not None and not mu > 0:
        root.fail("mu", f"mu must be positive, got {mu}")
    epsilon = root.number("epsilon")
    if epsilon is not None and not epsilon > 0:
        root.fail("epsilon", f"epsilon must be positive, got {epsilon}")

    return ExperimentConfig(
        preset=preset,
        convention=convention,
        nonlinearity=nonlinearity,
        params=params,
        N=N,
        geometry_kind=root.text("geometry", FINITE_DIRICHLET, GEOMETRY_KINDS),
        kind=root.text("kind", IMAGINARY_POSITIVE, INITIAL_DATA_KINDS),
        profile=profile,
        initial_norm=initial_norm,
        forcing_amplitude=root.number("forcing_amplitude", 0.0),
        forcing_decay=root.number("forcing_decay", 1.0),
        sigma_override=root.number("sigma"),
        mu=mu,
        epsilon=epsilon,
        seed=root.integer("seed", 0),
        label=root.text("label", "experiment"),
        integrator=_integrator(root, defaults or IntegratorConfig()),
        attractor=_attractor(sections.get(ATTRACTOR_SECTION)),
        truncation=_truncation(sections.get(TRUNCATE_SECTION)),
        source_text=source_text,
    )


def parse_sweep_config(sections: Dict[str, ConfigSection], base: ExperimentConfig) -> SweepConfig:
    """The [sweep] section on top of a parsed base experiment."""
    section = sections.get(SWEEP_SECTION)
    if section is None:
        raise ConfigError("Sweep config needs a [sweep] section")
    reader = _Reader(section)
    reader.check_known(SECTION_KEYS[SWEEP_SECTION])
    if "axis" not in section:
        raise ConfigError("[sweep] needs an axis", line=section.line)
    if "values" not in section:
        raise ConfigError("[sweep] needs values", line=section.line)
    axis = reader.text("axis", choices=SWEEP_AXES)
    values = tuple(reader.numbers("values"))
    try:
        return SweepConfig(base=base, axis=axis, values=values, output=reader.text("output", "results.csv"))
    except ConfigError as e:
        raise ConfigError(str(e), line=section.line_of("values")) from e


def load_experiment_config(
    file_path: Path,
    seed: Optional[int] = None,
    defaults: Optional[IntegratorConfig] = None,
) -> ExperimentConfig:
    """
    Read and resolve an experiment config file.

    Args:
        file_path: Path to the config
        seed: Overrides the file's seed when given
        defaults: Integrator defaults

    Returns:
        ExperimentConfig
    """
    sections = load_config_file(file_path)
    text = Path(file_path).read_text(encoding="utf-8")
    return parse_experiment_config(sections, text, defaults).with_seed(seed)


def load_sweep_config(
    file_path: Path,
    seed: Optional[int] = None,
    defaults: Optional[IntegratorConfig] = None,
) -> SweepConfig:
    """Read a sweep config: the base experiment plus its [sweep] section."""
    sections = load_config_file(file_path)
    text = Path(file_path).read_text(encoding="utf-8")
    base = parse_experiment_config(sections, text, defaults).with_seed(seed)
    return parse_sweep_config(sections, base)


def experiment_from_text(text: str, seed: Optional[int] = None) -> ExperimentConfig:
    """Resolve an experiment from config text."""
    return parse_experiment_config(parse_config_text(text), text).with_seed(seed)


def sweep_from_text(text: str, seed: Optional[int] = None) -> SweepConfig:
    """Resolve a sweep from config text."""
    sections = parse_config_text(text)
    return parse_sweep_config(sections, parse_experiment_config(sections, text).with_seed(seed))
