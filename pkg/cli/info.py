"""Info command - Display configuration and system information."""

import sys
from typing import TYPE_CHECKING

import numpy as np
import rich_click as click
from rich.console import Console
from rich.table import Table

if TYPE_CHECKING:
    from services.app_context import AppContext

__all__ = ["info"]


@click.command()
@click.pass_obj
def info(ctx: "AppContext") -> None:
    """Display effective configuration and tester constants."""
    console = Console()

    try:
        rows = [
            ("[bold]Run[/]", ""),
            ("  Seed", str(ctx.effective_seed)),
            ("  Trials", str(ctx.effective_trials)),
            ("  Workers", str(ctx.effective_workers)),
            ("  Batch size", str(ctx.config.get_batch_size())),
            ("  Record timing", str(ctx.config.get_record_timing())),
            ("[bold]Hadamard[/]", ""),
            ("  BLR multiplier", str(ctx.config.get_blr_multiplier())),
            ("  Generic constant", str(ctx.config.get_generic_constant())),
            ("[bold]Simon[/]", ""),
            ("  Repetition multiplier", str(ctx.config.get_repetition_multiplier())),
            ("  Exact max n", str(ctx.config.get_exact_max_n())),
            ("  Reuse prepared state", str(ctx.config.get_reuse_prepared_state())),
            ("[bold]d-wise[/]", ""),
            *((f"  {key}", str(value)) for key, value in ctx.config.get_dwise_limits().items()),
            ("[bold]Runtime[/]", ""),
            ("  numpy", np.__version__),
            ("  Log level", ctx.config.get_log_level()),
        ]
    except ValueError as e:
        console.print(f"[red]✗ Invalid configuration:[/] {e}")
        sys.exit(1)

    console.print("\n[bold]qpt Configuration[/]\n")
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Setting", style="cyan")
    table.add_column("Value", style="yellow")
    for setting, value in rows:
        table.add_row(setting, value)
    console.print(table)
    console.print()
