"""
Experiments: configuration files, runners behind the CLI and CSV persistence.
"""

from .config import (
    DCGL,
    DRGL,
    DNLS,
    PRESETS,
    SWEEP_AXES,
    ATTRACTOR_MODES,
    AttractorSettings,
    TruncationSettings,
    ExperimentConfig,
    SweepConfig,
    parse_experiment_config,
    parse_sweep_config,
    load_experiment_config,
    load_sweep_config,
    experiment_from_text,
    sweep_from_text,
)
from .persistence import (
    format_cell,
    write_csv,
    write_trajectory_csv,
    read_csv,
)
from .runners import (
    RESULT_COLUMNS,
    WEIGHTED_COLUMNS,
    BoundEvaluation,
    SimulationResult,
    ResultRow,
    AttractorResult,
    TruncationRow,
    evaluate_bounds,
    build_observers,
    simulate,
    run_simulate,
    run_cell,
    sweep_columns,
    sweep_rows,
    run_sweep,
    first_entry_time,
    attractor_experiment,
    run_attractor_experiment,
    truncation_difference,
    truncation_rows,
    run_truncation_experiment,
    run_bounds,
)

__all__ = [
    # Configuration
    "DCGL",
    "DRGL",
    "DNLS",
    "PRESETS",
    "SWEEP_AXES",
    "ATTRACTOR_MODES",
    "AttractorSettings",
    "TruncationSettings",
    "ExperimentConfig",
    "SweepConfig",
    "parse_experiment_config",
    "parse_sweep_config",
    "load_experiment_config",
    "load_sweep_config",
    "experiment_from_text",
    "sweep_from_text",
    # Persistence
    "format_cell",
    "write_csv",
    "write_trajectory_csv",
    "read_csv",
    # Runners
    "RESULT_COLUMNS",
    "WEIGHTED_COLUMNS",
    "BoundEvaluation",
    "SimulationResult",
    "ResultRow",
    "AttractorResult",
    "TruncationRow",
    "evaluate_bounds",
    "build_observers",
    "simulate",
    "run_simulate",
    "run_cell",
    "sweep_columns",
    "sweep_rows",
    "run_sweep",
    "first_entry_time",
    "attractor_experiment",
    "run_attractor_experiment",
    "truncation_difference",
    "truncation_rows",
    "run_truncation_experiment",
    "run_bounds",
]
