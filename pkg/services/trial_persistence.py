"""Persistence layer for trial records: JSON Lines plus a CSV projection."""

import csv
import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from models.trial_record import TrialRecord

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("experiment", "n", "eps", "mode", "seed", "verdict", "queries")


class TrialRecordStore:
    """Reads and writes :class:`TrialRecord` files.

    JSON Lines is the source of truth (one record per line, written with
    ``model_dump_json`` so repeated runs produce identical bytes); CSV is a
    lossy projection for spreadsheets.
    """

    def __init__(self, path: str | Path) -> None:
        """Initialize the store.

        Args:
            path: JSON Lines file to read or write.
        """
        self.path = Path(path)

    def save(self, records: Iterable[TrialRecord], append: bool = False) -> int:
        """Write records, one JSON object per line.

        Args:
            records: Records in the order they should appear.
            append: Append instead of truncating.

        Returns:
            Number of records written.
        """
        self.path.parent.mkdir(parents=True, exist_ok=True)
        count = 0
        with self.path.open("a" if append else "w", encoding="utf-8", newline="\n") as f:
            for record in records:
                f.write(record.model_dump_json())
                f.write("\n")
                count += 1
        logger.info(f"Saved {count} trial records to {self.path}")
        return count

    def load(self) -> list[TrialRecord]:
        """Read every record back.

        Returns:
            Records in file order; an empty file yields an empty list.

        Raises:
            FileNotFoundError: If the file doesn't exist.
            ValueError: If a line is not a valid record; the message names
                ``path:line``.
        """
        if not self.path.exists():
            raise FileNotFoundError(f"Trial record file not found: {self.path}")

        records: list[TrialRecord] = []
        with self.path.open(encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    records.append(TrialRecord.model_validate_json(line))
                except ValidationError as e:
                    logger.error(f"Malformed trial record at {self.path}:{lineno}")
                    raise ValueError(f"{self.path}:{lineno}: invalid trial record: {e}") from e
        logger.info(f"Loaded {len(records)} trial records from {self.path}")
        return records

    def export_csv(self, csv_path: str | Path, records: Iterable[TrialRecord] | None = None) -> int:
        """Write the CSV projection of ``records`` (default: the stored ones).

        Returns:
            Number of rows written.
        """
        rows = list(records) if records is not None else self.load()
        csv_path = Path(csv_path)
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        with csv_path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for record in rows:
                writer.writerow(_project(record))
        logger.info(f"Exported {len(rows)} rows to {csv_path}")
        return len(rows)


def _project(record: TrialRecord) -> dict[str, Any]:
    data = record.model_dump()
    return {column: "" if data[column] is None else data[column] for column in CSV_COLUMNS}
