"""Tests for the trial record store."""

import csv
from pathlib import Path

import pytest

from models.trial_record import TrialRecord
from services.trial_persistence import CSV_COLUMNS, TrialRecordStore


@pytest.fixture
def sample_records() -> list[TrialRecord]:
    """Two records, one without an epsilon."""
    return [
        TrialRecord(
            experiment="separation",
            config="n=8,eps=0.25",
            trial=0,
            n=8,
            eps=0.25,
            mode="quantum",
            input_kind="member",
            seed=123,
            verdict="accept",
            queries=25,
            params={"rounds": 8, "a_size": 4},
        ),
        TrialRecord(
            experiment="bias",
            trial=1,
            n=4,
            mode="depth-3",
            seed=2**64 - 1,
            verdict="reject",
            queries=3,
        ),
    ]


class TestTrialRecordStore:
    """Tests for TrialRecordStore."""

    def test_save_and_load(self, tmp_path: Path, sample_records: list[TrialRecord]) -> None:
        # Arrange
        store = TrialRecordStore(tmp_path / "nested" / "records.jsonl")

        # Act
        written = store.save(sample_records)
        loaded = store.load()

        # Assert
        assert written == 2
        assert loaded == sample_records
        assert loaded[1].seed == 2**64 - 1

    def test_one_record_per_line(self, tmp_path: Path, sample_records: list[TrialRecord]) -> None:
        # Arrange
        path = tmp_path / "records.jsonl"

        # Act
        TrialRecordStore(path).save(sample_records)

        # Assert
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2
        assert lines[0] == sample_records[0].model_dump_json()

    def test_saves_are_byte_identical(self, tmp_path: Path, sample_records: list[TrialRecord]) -> None:
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        TrialRecordStore(a).save(sample_records)
        TrialRecordStore(b).save(sample_records)
        assert a.read_bytes() == b.read_bytes()

    def test_append(self, tmp_path: Path, sample_records: list[TrialRecord]) -> None:
        # Arrange
        store = TrialRecordStore(tmp_path / "records.jsonl")
        store.save(sample_records[:1])

        # Act
        store.save(sample_records[1:], append=True)

        # Assert
        assert store.load() == sample_records

    def test_empty_file(self, tmp_path: Path) -> None:
        # Arrange
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")

        # Act & Assert
        assert TrialRecordStore(path).load() == []

    def test_blank_lines_skipped(self, tmp_path: Path, sample_records: list[TrialRecord]) -> None:
        path = tmp_path / "records.jsonl"
        path.write_text(f"\n{sample_records[0].model_dump_json()}\n\n", encoding="utf-8")
        assert TrialRecordStore(path).load() == sample_records[:1]

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError, match="Trial record file not found"):
            TrialRecordStore(tmp_path / "absent.jsonl").load()

    def test_malformed_line_names_location(
        self, tmp_path: Path, sample_records: list[TrialRecord]
    ) -> None:
        # Arrange
        path = tmp_path / "records.jsonl"
        path.write_text(f"{sample_records[0].model_dump_json()}\n{{not json}}\n", encoding="utf-8")

        # Act & Assert
        with pytest.raises(ValueError, match=r"records\.jsonl:2: invalid trial record"):
            TrialRecordStore(path).load()

    def test_invalid_record_rejected(self, tmp_path: Path, sample_records: list[TrialRecord]) -> None:
        # Arrange: a negative query count fails validation
        data = sample_records[0].model_dump_json().replace('"queries":25', '"queries":-1')
        path = tmp_path / "records.jsonl"
        path.write_text(data + "\n", encoding="utf-8")

        # Act & Assert
        with pytest.raises(ValueError, match=":1:"):
            TrialRecordStore(path).load()


class TestCsvExport:
    """Tests for the CSV projection."""

    def test_export_given_records(self, tmp_path: Path, sample_records: list[TrialRecord]) -> None:
        # Arrange
        csv_path = tmp_path / "out" / "records.csv"

        # Act
        rows_written = TrialRecordStore(tmp_path / "unused.jsonl").export_csv(csv_path, sample_records)

        # Assert
        with csv_path.open(encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        assert rows_written == 2
        assert tuple(rows[0]) == CSV_COLUMNS
        assert rows[0] == {
            "experiment": "separation",
            "n": "8",
            "eps": "0.25",
            "mode": "quantum",
            "seed": "123",
            "verdict": "accept",
            "queries": "25",
        }
        assert rows[1]["eps"] == ""

    def test_export_stored_records(self, tmp_path: Path, sample_records: list[TrialRecord]) -> None:
        # Arrange
        store = TrialRecordStore(tmp_path / "records.jsonl")
        store.save(sample_records)

        # Act
        count = store.export_csv(tmp_path / "records.csv")

        # Assert
        assert count == 2
        assert len((tmp_path / "records.csv").read_text(encoding="utf-8").splitlines()) == 3
