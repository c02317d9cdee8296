#!/usr/bin/env python3
"""
Utility functions for the lattice laboratory.

This module contains helper functions for logging, JSON persistence,
decimal formatting, and parsing of the line-based experiment configs.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from lattice.errors import ConfigError

# Name of the implicit section holding keys that appear before any [section] header
ROOT_SECTION = ""


class ConfigSection(dict):
    """Key/value strings of one config section, remembering the line of each key."""

    def __init__(self, name: str, line: Optional[int] = None):
        super().__init__()
        self.name = name
        self.line = line
        self.lines: Dict[str, int] = {}

    def line_of(self, key: str) -> Optional[int]:
        return self.lines.get(key, self.line)


def setup_logging(log_file: Path, level: int = logging.INFO):
    """
    Set up logging configuration.

    Args:
        log_file: Path to log file
        level: Root logging level
    """
    if not log_file.parent.exists():
        log_file.parent.mkdir(parents=True, exist_ok=True)

    if not log_file.exists():
        log_file.touch()

    logging.basicConfig(
        level=level,
        format="%(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler(sys.stdout)
        ]
    )


def load_json_file(file_path: Path) -> Optional[Dict]:
    """
    Load a JSON file.

    Args:
        file_path: Path to the JSON file

    Returns:
        Parsed JSON data or None on error
    """
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (FileNotFoundError, json.JSONDecodeError) as e:
        logging.error(f"Error loading {file_path}: {e}")
        return None


def write_json_file(file_path: Path, data: Dict[str, Any]) -> Path:
    """
    Write a report as indented JSON with sorted keys.

    Non-finite floats are written as null so the file stays valid JSON.

    Args:
        file_path: Destination path; parent directories are created
        data: JSON-serializable mapping

    Returns:
        The path written
    """
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as f:
        json.dump(_finite_or_null(data), f, indent=2, sort_keys=True)
        f.write("\n")
    return file_path


def _finite_or_null(value: Any) -> Any:
    if isinstance(value, float):
        return value if value == value and abs(value) != float("inf") else None
    if isinstance(value, dict):
        return {key: _finite_or_null(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_null(item) for item in value]
    return value


def format_float(value: Optional[float]) -> str:
    """
    Format a number with 17 significant digits (round-trip exact).

    Args:
        value: Number to format, or None

    Returns:
        Decimal string, or the empty string for None
    """
    if value is None:
        return ""
    return format(float(value), ".17g")


def load_config_file(file_path: Path) -> Dict[str, ConfigSection]:
    """
    Parse a line-based ``key = value`` experiment config.

    ``#`` starts a comment, blank lines are ignored and ``[name]`` opens a
    section. Keys before the first section land in the root section ``""``.

    Args:
        file_path: Path to the config file

    Returns:
        Mapping of section name to its key/value strings

    Raises:
        ConfigError: unreadable file, malformed line or duplicate key
    """
    try:
        text = Path(file_path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {file_path}: {e}") from e
    return parse_config_text(text)


def parse_config_text(text: str) -> Dict[str, ConfigSection]:
    """Parse config text; see load_config_file."""
    sections: Dict[str, ConfigSection] = {ROOT_SECTION: ConfigSection(ROOT_SECTION)}
    current = ROOT_SECTION

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue

        if line.startswith("["):
            if not line.endswith("]") or len(line) < 3:
                raise ConfigError(f"Malformed section header {raw_line.strip()!r}", line=line_no)
            current = line[1:-1].strip().lower()
            if current in sections:
                raise ConfigError(f"Duplicate section [{current}]", line=line_no)
            sections[current] = ConfigSection(current, line_no)
            continue

        if "=" not in line:
            raise ConfigError(f"Expected 'key = value', got {raw_line.strip()!r}", line=line_no)

        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("Missing key before '='", line=line_no)
        if key in sections[current]:
            raise ConfigError(f"Duplicate key {key!r}", line=line_no)
        sections[current][key] = value
        sections[current].lines[key] = line_no

    return sections
