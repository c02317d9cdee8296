"""
Tests for utils module.

Tests JSON loading and writing, float formatting, and parsing of the
line-based experiment configs.
"""

import sys
from pathlib import Path
import pytest
import json
from unittest.mock import patch, mock_open

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from lattice import ConfigError
from utils import (
    ROOT_SECTION,
    format_float,
    load_config_file,
    load_json_file,
    parse_config_text,
    write_json_file,
)


@pytest.mark.unit
class TestParseConfigText:
    """Test parsing of key = value configs."""

    def test_root_and_sections(self):
        """Keys before the first header land in the root section."""
        text = "lambda = 1\nk = -1\n\n[attractor]\nmode = finite\n"
        sections = parse_config_text(text)

        assert set(sections) == {ROOT_SECTION, "attractor"}
        assert sections[ROOT_SECTION] == {"lambda": "1", "k": "-1"}
        assert sections["attractor"] == {"mode": "finite"}

    def test_comments_and_blank_lines(self):
        text = "# header comment\n\nN = 10  # sites\n   \n"
        sections = parse_config_text(text)
        assert sections[ROOT_SECTION] == {"N": "10"}

    def test_line_numbers(self):
        text = "# comment\nN = 10\n\n[sweep]\naxis = N\nvalues = 10, 20\n"
        sections = parse_config_text(text)

        assert sections[ROOT_SECTION].line_of("N") == 2
        assert sections["sweep"].line == 4
        assert sections["sweep"].line_of("values") == 6
        # unknown keys fall back to the section header line
        assert sections["sweep"].line_of("output") == 4

    def test_section_names_lowercased(self):
        sections = parse_config_text("[Sweep]\naxis = N\n")
        assert "sweep" in sections
        assert sections["sweep"].name == "sweep"

    def test_value_keeps_equals_sign(self):
        sections = parse_config_text("label = a=b\n")
        assert sections[ROOT_SECTION]["label"] == "a=b"

    def test_empty_text(self):
        assert parse_config_text("") == {ROOT_SECTION: {}}

    @pytest.mark.parametrize("text,line", [
        ("N = 10\nnot a pair\n", 2),
        ("= 3\n", 1),
        ("N = 1\nN = 2\n", 2),
        ("[sweep\naxis = N\n", 1),
        ("[]\n", 1),
        ("[sweep]\naxis = N\n[sweep]\n", 3),
    ])
    def test_malformed(self, text, line):
        """Every parse error carries the 1-based line number."""
        with pytest.raises(ConfigError) as exc:
            parse_config_text(text)
        assert exc.value.line == line


@pytest.mark.unit
class TestLoadConfigFile:
    """Test reading configs from disk."""

    def test_load(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("p = 3\n[truncate]\nT = 5\n", encoding="utf-8")
        sections = load_config_file(path)
        assert sections[ROOT_SECTION]["p"] == "3"
        assert sections["truncate"]["T"] == "5"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config_file(tmp_path / "missing.cfg")


@pytest.mark.unit
class TestFormatFloat:
    """Test round-trip float formatting."""

    def test_none(self):
        assert format_float(None) == ""

    def test_round_trip(self):
        for value in (0.1, 1.0 / 3.0, 2.0 ** -40, 1e300, -7.25):
            assert float(format_float(value)) == value

    def test_integer_valued(self):
        assert format_float(2.0) == "2"


@pytest.mark.unit
class TestLoadJsonFile:
    """Test JSON file loading."""

    def test_load_valid_json(self):
        """Test loading a valid JSON file."""
        test_data = {
            "command": "simulate",
            "report": {"blew_up": True, "t_sim": 0.5},
        }

        with patch("builtins.open", mock_open(read_data=json.dumps(test_data))):
            result = load_json_file(Path("test.json"))

        assert result is not None
        assert result["command"] == "simulate"
        assert result["report"]["t_sim"] == 0.5

    def test_load_invalid_json(self):
        """Test loading an invalid JSON file."""
        with patch("builtins.open", mock_open(read_data="invalid json")):
            result = load_json_file(Path("invalid.json"))

        assert result is None

    def test_load_nonexistent_file(self):
        """Test loading a nonexistent file."""
        result = load_json_file(Path("nonexistent.json"))
        assert result is None


@pytest.mark.unit
class TestWriteJsonFile:
    """Test JSON report writing."""

    def test_sorted_and_indented(self, tmp_path):
        path = write_json_file(tmp_path / "out" / "report.json", {"b": 1, "a": [1.5, None]})
        text = path.read_text(encoding="utf-8")
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")
        assert json.loads(text) == {"a": [1.5, None], "b": 1}

    def test_non_finite_written_as_null(self, tmp_path):
        data = {"final_norm": float("inf"), "nested": {"x": float("nan")}, "values": (1.0, float("-inf"))}
        path = write_json_file(tmp_path / "report.json", data)
        assert load_json_file(path) == {"final_norm": None, "nested": {"x": None}, "values": [1.0, None]}

    def test_identical_bytes(self, tmp_path):
        data = {"t_star": 1.0 / 3.0, "valid": True}
        first = write_json_file(tmp_path / "a.json", data).read_bytes()
        second = write_json_file(tmp_path / "b.json", data).read_bytes()
        assert first == second
