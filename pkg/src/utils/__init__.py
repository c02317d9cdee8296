"""
Shared utilities for the lattice laboratory.

This package contains logging setup, JSON persistence and config parsing helpers.
"""

from .utils import (
    ROOT_SECTION,
    ConfigSection,
    setup_logging,
    load_json_file,
    write_json_file,
    format_float,
    load_config_file,
    parse_config_text,
)

__all__ = [
    # Logging
    "setup_logging",
    # Persistence
    "load_json_file",
    "write_json_file",
    "format_float",
    # Config files
    "ROOT_SECTION",
    "ConfigSection",
    "load_config_file",
    "parse_config_text",
]
