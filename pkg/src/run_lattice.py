#!/usr/bin/env python3
"""
Lattice Laboratory

Command-line driver for the discrete Ginzburg-Landau lattice experiments.
Every subcommand reads one line-based config file and writes CSV/JSON
artifacts into an output directory:

    simulate   single run: trajectory.csv + report.json
    sweep      parameter sweep over one axis: results.csv + sweep.json
    attractor  absorbing-ball experiment: decay.csv + attractor.json
    truncate   truncation convergence ladder: truncation.csv + truncate.json
    bounds     blow-up bounds and estimates without integrating: bounds.json

Exit codes: 0 on success, 2 on a config or other library error, 3 on a violated
hypothesis.

Usage:
    python run_lattice.py simulate configs/dnls_conservation.cfg
    python run_lattice.py sweep configs/sweep_sigma_1.cfg --threads 4
    python run_lattice.py attractor configs/attractor_finite.cfg --out output/ball
    python run_lattice.py bounds configs/drgl_blowup.cfg --seed 7
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from lattice import ConfigError, HypothesisError, InvalidRadiusError, LatticeError
from integrate import IntegratorConfig
from experiments import (
    load_experiment_config,
    load_sweep_config,
    run_attractor_experiment,
    run_bounds,
    run_simulate,
    run_sweep,
    run_truncation_experiment,
)
from utils import setup_logging
from lattice_config import (
    COMMAND_DIRS,
    COMMAND_LOG_FILES,
    DEFAULT_BLOWUP_THRESHOLD,
    DEFAULT_DT,
    default_threads,
    log_level,
)

COMMANDS = ("simulate", "sweep", "attractor", "truncate", "bounds")

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_HYPOTHESIS_ERROR = 3


def integrator_defaults() -> IntegratorConfig:
    """Integrator settings for keys a config leaves out, taken from the environment."""
    return IntegratorConfig(dt=DEFAULT_DT, blowup_threshold=DEFAULT_BLOWUP_THRESHOLD)


def run_command(command: str, config_path: Path, out_dir: Path, seed: Optional[int], threads: int):
    """Dispatch one subcommand; exceptions propagate to main."""
    defaults = integrator_defaults()

    if command == "sweep":
        sweep = load_sweep_config(config_path, seed, defaults)
        rows = run_sweep(sweep, out_dir, threads)
        logging.info(f"Cells: {len(rows)}, valid bounds: {sum(row.valid for row in rows)}, "
                     f"blown up: {sum(row.T_sim is not None for row in rows)}")
        return

    cfg = load_experiment_config(config_path, seed, defaults)
    if command == "simulate":
        result = run_simulate(cfg, out_dir)
        report = result.report
        logging.info(f"blew_up={report.blew_up}, T_sim={report.t_sim}, T*={report.bound_t_star}, "
                     f"valid={report.bound_valid}")
    elif command == "attractor":
        result = run_attractor_experiment(cfg, out_dir)
        logging.info(f"t0={result.report.t0}, measurements: {sorted(result.measurements)}")
    elif command == "truncate":
        rows = run_truncation_experiment(cfg, out_dir)
        for row in rows:
            logging.info(f"N={row.N} vs {row.N_ref}: {row.sup_difference:.3e}")
    elif command == "bounds":
        result = run_bounds(cfg, out_dir)
        logging.info(f"bound_kind={result.bound_kind}, T*={result.t_star}, valid={result.valid}")
    else:
        raise ConfigError(f"Unknown command {command!r}")


def main(
    command: str,
    config_path: Path,
    out_dir: Optional[Path] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> int:
    """
    Main execution function.

    Args:
        command: One of simulate, sweep, attractor, truncate, bounds
        config_path: Experiment config file
        out_dir: Output directory (default: output/<command>)
        seed: Overrides the config's seed
        threads: Sweep worker threads (default: LATTICE_THREADS or CPU count)

    Returns:
        Process exit code
    """
    setup_logging(COMMAND_LOG_FILES.get(command, COMMAND_LOG_FILES["simulate"]), log_level())

    logging.info("=" * 80)
    logging.info(f"Lattice Laboratory: {command} {config_path}")
    logging.info("=" * 80)

    out_dir = Path(out_dir) if out_dir else COMMAND_DIRS.get(command, COMMAND_DIRS["simulate"])
    threads = threads or default_threads()

    try:
        run_command(command, Path(config_path), out_dir, seed, threads)
    except ConfigError as e:
        logging.error(f"Config error in {config_path}: {e}")
        return EXIT_CONFIG_ERROR
    except (HypothesisError, InvalidRadiusError) as e:
        term = getattr(e, "term", None)
        logging.error(f"Hypothesis violated{f' ({term})' if term else ''}: {e}")
        return EXIT_HYPOTHESIS_ERROR
    except ValueError as e:
        # parameter validation of the library dataclasses
        logging.error(f"Invalid parameter in {config_path}: {e}")
        return EXIT_CONFIG_ERROR
    except LatticeError as e:
        logging.error(f"{type(e).__name__} in {config_path}: {e}")
        return EXIT_CONFIG_ERROR

    # Final summary
    logging.info("\n" + "=" * 80)
    logging.info("FINAL SUMMARY")
    logging.info("=" * 80)
    logging.info(f"Command: {command}")
    logging.info(f"Config: {config_path}")
    logging.info(f"Output: {out_dir}")
    logging.info("=" * 80)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Discrete Ginzburg-Landau lattice experiments"
    )
    parser.add_argument(
        "command",
        choices=COMMANDS,
        help="Experiment to run"
    )
    parser.add_argument(
        "config",
        type=Path,
        help="Path to the key = value experiment config"
    )
    parser.add_argument(
        "--out",
        type=Path,
        help="Output directory (default: output/<command>)"
    )
    parser.add_argument(
        "--seed",
        type=int,
        help="Override the seed of the config"
    )
    parser.add_argument(
        "--threads",
        type=int,
        help="Worker threads for sweeps (default: LATTICE_THREADS or CPU count)"
    )
    return parser


if __name__ == "__main__":
    args = build_parser().parse_args()

    sys.exit(main(
        command=args.command,
        config_path=args.config,
        out_dir=args.out,
        seed=args.seed,
        threads=args.threads,
    ))
