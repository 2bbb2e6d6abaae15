"""Verify command - Run the exhaustive identity checks behind the testers."""

import sys
from typing import TYPE_CHECKING

import rich_click as click
from rich.console import Console
from rich.table import Table

from cli._output import emit_json

if TYPE_CHECKING:
    from services.app_context import AppContext

__all__ = ["verify"]


@click.group()
def verify() -> None:
    """Self-checks of the simulator and the constructions."""


@verify.command()
@click.option("--only", multiple=True, help="Run only the named check (repeatable)")
@click.pass_obj
def lemmas(ctx: "AppContext", only: tuple[str, ...]) -> None:
    """Check BV exactness, the Q-state closed form, the coset iff statements,
    majority repair, repetition arithmetic and the d-wise constructions.

    Exits with status 1 if any check finds a counterexample.
    """
    from services.verification_service import verify_lemmas

    console = Console()
    try:
        if ctx.json_output:
            results = verify_lemmas(list(only))
        else:
            with console.status("[bold]Running checks...[/]"):
                results = verify_lemmas(list(only))
    except Exception as e:
        console.print(f"\n[red]✗ Verification failed:[/] {e}\n")
        sys.exit(1)

    failed = [r for r in results if not r.passed]
    if ctx.json_output:
        emit_json([r.model_dump() for r in results])
    else:
        table = Table(title="Checks", header_style="bold magenta")
        table.add_column("check", style="cyan")
        table.add_column("result")
        table.add_column("cases")
        table.add_column("detail", style="dim")
        for r in results:
            mark = "[green]✓ pass[/]" if r.passed else "[red]✗ fail[/]"
            detail = r.detail or "; ".join(r.counterexamples)
            table.add_row(r.name, mark, str(r.cases), detail)
        console.print(table)

    if failed:
        if not ctx.json_output:
            console.print(f"\n[red]✗ {len(failed)} check(s) failed[/]\n")
        sys.exit(1)
