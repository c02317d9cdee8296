#!/usr/bin/env python3
"""
Lattice Laboratory Configuration Module

Centralized configuration for the lattice experiment scripts.
Defines output directories, log file paths, and loads environment variables.
"""

import logging
import os
from dotenv import load_dotenv
from pathlib import Path

load_dotenv()

MAIN_DIR = Path()

if os.getenv("MAIN_DIR", ""):
    MAIN_DIR = Path(os.getenv("MAIN_DIR"))

OUTPUT_DIR = MAIN_DIR / "output"
LOG_DIR = MAIN_DIR / "logs"

SIMULATE_DIR = OUTPUT_DIR / "simulate"
SWEEP_DIR = OUTPUT_DIR / "sweep"
ATTRACTOR_DIR = OUTPUT_DIR / "attractor"
TRUNCATE_DIR = OUTPUT_DIR / "truncate"
BOUNDS_DIR = OUTPUT_DIR / "bounds"

LOG_FILE_SIMULATE = LOG_DIR / "simulate.log"
LOG_FILE_SWEEP = LOG_DIR / "sweep.log"
LOG_FILE_ATTRACTOR = LOG_DIR / "attractor.log"
LOG_FILE_TRUNCATE = LOG_DIR / "truncate.log"
LOG_FILE_BOUNDS = LOG_DIR / "bounds.log"

COMMAND_DIRS = {
    "simulate": SIMULATE_DIR,
    "sweep": SWEEP_DIR,
    "attractor": ATTRACTOR_DIR,
    "truncate": TRUNCATE_DIR,
    "bounds": BOUNDS_DIR,
}

COMMAND_LOG_FILES = {
    "simulate": LOG_FILE_SIMULATE,
    "sweep": LOG_FILE_SWEEP,
    "attractor": LOG_FILE_ATTRACTOR,
    "truncate": LOG_FILE_TRUNCATE,
    "bounds": LOG_FILE_BOUNDS,
}


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name, "")
    if not raw:
        return default
    try:
        return float(raw)
    except ValueError:
        logging.warning(f"Ignoring non-numeric {name}={raw!r}, using {default}")
        return default


def default_threads() -> int:
    """
    Worker count for sweeps.

    Returns:
        LATTICE_THREADS from the environment, or the CPU count
    """
    raw = os.getenv("LATTICE_THREADS", "")
    if raw.isdigit() and int(raw) > 0:
        return int(raw)
    return os.cpu_count() or 1


def log_level() -> int:
    """Logging level named by LATTICE_LOG_LEVEL (default INFO)."""
    name = os.getenv("LATTICE_LOG_LEVEL", "INFO").upper()
    return getattr(logging, name, logging.INFO)


DEFAULT_DT = _env_float("LATTICE_DT", 1e-3)
DEFAULT_BLOWUP_THRESHOLD = _env_float("LATTICE_BLOWUP_THRESHOLD", 1e6)


__all__ = [
    "default_threads",
    "log_level",
    "OUTPUT_DIR",
    "LOG_DIR",
    "SIMULATE_DIR",
    "SWEEP_DIR",
    "ATTRACTOR_DIR",
    "TRUNCATE_DIR",
    "BOUNDS_DIR",
    "LOG_FILE_SIMULATE",
    "LOG_FILE_SWEEP",
    "LOG_FILE_ATTRACTOR",
    "LOG_FILE_TRUNCATE",
    "LOG_FILE_BOUNDS",
    "COMMAND_DIRS",
    "COMMAND_LOG_FILES",
    "DEFAULT_DT",
    "DEFAULT_BLOWUP_THRESHOLD",
]
