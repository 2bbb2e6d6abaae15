"""Shared rendering and persistence for commands that produce trial records."""

import json
from collections.abc import Sequence
from typing import TYPE_CHECKING, Any

import rich_click as click
from rich.console import Console
from rich.table import Table

from models.trial_record import ExperimentSummary, TrialRecord
from services.trial_persistence import TrialRecordStore

if TYPE_CHECKING:
    from services.app_context import AppContext


def persist_records(ctx: "AppContext", records: Sequence[TrialRecord], console: Console) -> None:
    """Write records to ``--out`` / ``--csv`` when given."""
    if ctx.out is not None:
        count = TrialRecordStore(ctx.out).save(records)
        if not ctx.json_output:
            console.print(f"[green]✓[/] Wrote {count} records to [cyan]{ctx.out}[/]")
    if ctx.csv is not None:
        count = TrialRecordStore(ctx.out or ctx.csv).export_csv(ctx.csv, records)
        if not ctx.json_output:
            console.print(f"[green]✓[/] Wrote {count} CSV rows to [cyan]{ctx.csv}[/]")


def summary_table(title: str, summaries: Sequence[ExperimentSummary], extra_columns: Sequence[str] = ()) -> Table:
    """Rich table with one row per configuration."""
    table = Table(title=title, show_header=True, header_style="bold magenta")
    for name in ("config", "mode", "input", "trials", "accept rate", "95% CI", "mean q", "max q"):
        table.add_column(name, style="cyan" if name == "config" else None)
    for name in extra_columns:
        table.add_column(name)

    for s in summaries:
        table.add_row(
            s.config,
            s.mode,
            s.input_kind,
            str(s.trials),
            f"{s.accept_rate:.3f}",
            f"[{s.ci_low:.3f}, {s.ci_high:.3f}]",
            f"{s.mean_queries:.2f}",
            str(s.max_queries),
            *(str(s.extra.get(name, "")) for name in extra_columns),
        )
    return table


def emit_json(payload: Any) -> None:
    """Print a JSON document on stdout with no rich markup."""
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


def summaries_payload(summaries: Sequence[ExperimentSummary]) -> list[dict[str, Any]]:
    return [s.model_dump(mode="json") for s in summaries]
