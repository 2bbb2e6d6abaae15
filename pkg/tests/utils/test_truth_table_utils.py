"""Tests for truth-table and A-set file formats."""

from pathlib import Path

import pytest

from models.bits import BitString, BooleanFunction
from utils.truth_table_utils import (
    format_truth_table,
    load_a_set,
    load_truth_table,
    parse_a_set,
    parse_truth_table,
    save_truth_table,
)


class TestTruthTable:
    """Tests for parsing and writing truth tables."""

    def test_parse_binary_body(self) -> None:
        # Act
        f = parse_truth_table("n=3\n01101001\n")

        # Assert
        assert f.n == 3
        assert [f(x) for x in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]

    def test_parse_hex_body(self) -> None:
        # 0x69 = 01101001 with coordinate 0 first in the rendered table
        assert parse_truth_table("n=3\n0x69\n").to_table() == "01101001"

    def test_blank_lines_and_spacing_ignored(self) -> None:
        assert parse_truth_table("\n  n = 2 \n\n0110\n\n").to_table() == "0110"

    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("0110\n", "exactly 2"),
            ("m=2\n0110\n", "Malformed header"),
            ("n=0\n0\n", "n must be >= 1"),
            ("n=2\n011\n", "expected 4"),
            ("n=2\n0x1f\n", "does not fit"),
            ("n=2\n0xzz\n", "Malformed hex"),
        ],
    )
    def test_malformed(self, text: str, message: str) -> None:
        with pytest.raises(ValueError, match=message):
            parse_truth_table(text)

    @pytest.mark.parametrize("as_hex", [False, True])
    def test_save_then_load(self, tmp_path: Path, as_hex: bool) -> None:
        # Arrange
        f = BooleanFunction.from_table("0111000110101100")
        path = tmp_path / "f.tt"

        # Act
        save_truth_table(f, path, as_hex=as_hex)

        # Assert
        assert load_truth_table(path) == f

    def test_format(self) -> None:
        f = BooleanFunction.from_table("0110")
        assert format_truth_table(f) == "n=2\n0110\n"
        assert format_truth_table(f, as_hex=True) == "n=2\n0x6\n"

    def test_load_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError, match="Truth table file not found"):
            load_truth_table(tmp_path / "missing.tt")


class TestASet:
    """Tests for A-set files."""

    def test_parse_with_comments(self) -> None:
        # Act
        members = parse_a_set("# allowed messages\n001\n110  # second\n\n001\n")

        # Assert
        assert members == {BitString.from_label("001"), BitString.from_label("110")}

    def test_length_mismatch_names_line(self) -> None:
        with pytest.raises(ValueError, match="line 2: expected 3 bits"):
            parse_a_set("001\n01\n")

    def test_expected_length(self) -> None:
        with pytest.raises(ValueError, match="line 1: expected 4 bits"):
            parse_a_set("001\n", m=4)

    def test_non_binary_line(self) -> None:
        with pytest.raises(ValueError, match="line 1"):
            parse_a_set("0a1\n")

    def test_load(self, tmp_path: Path) -> None:
        # Arrange
        path = tmp_path / "a.txt"
        path.write_text("00\n11\n", encoding="utf-8")

        # Act & Assert
        assert {y.value for y in load_a_set(path, m=2)} == {0, 3}

    def test_load_empty_file(self, tmp_path: Path) -> None:
        path = tmp_path / "a.txt"
        path.write_text("# nothing\n", encoding="utf-8")
        assert load_a_set(path) == set()

    def test_load_missing(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError, match="A-set file not found"):
            load_a_set(tmp_path / "none.txt")
