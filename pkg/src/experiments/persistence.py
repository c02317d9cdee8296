"""
CSV output of experiment tables.

Floats are written with 17 significant digits, missing values as empty
fields and flags as true/false, so identical runs give identical bytes.
"""

import csv
import logging
from pathlib import Path
from typing import Iterable, List, Sequence

from integrate import Trajectory
from utils import format_float

logger = logging.getLogger(__name__)


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_csv(file_path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    """
    Write a table with a header row.

    Args:
        file_path: Destination; parent directories are created
        header: Column names
        rows: Row values, formatted by format_cell

    Returns:
        The path written
    """
    file_path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(file_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(value) for value in row])
            count += 1
    logger.info(f"Wrote {count} rows to {file_path}")
    return file_path


def trajectory_header(trajectory: Trajectory) -> List[str]:
    return ["t", "norm2", "norm_inf", *trajectory.functional_names]


def write_trajectory_csv(file_path: Path, trajectory: Trajectory) -> Path:
    """Time series (t, norm2, norm_inf, observed functionals) of one run."""
    return write_csv(file_path, trajectory_header(trajectory), trajectory.rows())


def read_csv(file_path: Path) -> List[List[str]]:
    """All rows of a CSV file, header included."""
    with open(file_path, "r", encoding="utf-8", newline="") as f:
        return list(csv.reader(f))
