"""d-wise commands - Generate, verify and inspect d-wise independent sample spaces."""

import sys
from pathlib import Path
from typing import TYPE_CHECKING

import rich_click as click
from rich.console import Console
from rich.table import Table

from cli._output import emit_json

if TYPE_CHECKING:
    from services.app_context import AppContext

__all__ = ["dwise"]

_K = click.option("--k", type=click.IntRange(1, 16), required=True, help="Field degree (n = 2^k - 1)")
_T = click.option("--t", type=click.IntRange(min=1), required=True, help="Independence parameter (d = 2t + 1)")


@click.group()
def dwise() -> None:
    """Sample spaces xi : Omega -> {0,1}^n built from GF(2^k) powers."""


@dwise.command()
@_K
@_T
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Destination file")
@click.pass_obj
def gen(ctx: "AppContext", k: int, t: int, out_path: Path) -> None:
    """Write every member of P = xi(Omega), one table-form string per line."""
    console = Console()
    try:
        from services.dwise_service import DWiseSpace, write_property

        space = DWiseSpace(k, t)
        limit = ctx.config.get_dwise_limits()["max_property_length"]
        count = write_property(space, out_path, max_length=limit)
    except Exception as e:
        console.print(f"\n[red]✗ Generation failed:[/] {e}\n")
        sys.exit(1)

    if ctx.json_output:
        emit_json({"k": k, "t": t, "n": space.n, "d": space.d, "omega": space.size, "members": count})
    else:
        console.print(
            f"[green]✓[/] Wrote {count} members (n={space.n}, d={space.d}, |Omega|={space.size}) to [cyan]{out_path}[/]"
        )


@dwise.command()
@_K
@_T
@click.option("--d", "degree", type=click.IntRange(min=1), help="Independence order to check (default: 2t + 1)")
@click.pass_obj
def verify(ctx: "AppContext", k: int, t: int, degree: int | None) -> None:
    """Check exhaustively that every d positions are jointly uniform over Omega."""
    console = Console()
    try:
        from services.dwise_service import DWiseSpace, verify_dwise

        space = DWiseSpace(k, t)
        d = degree if degree is not None else space.d
        limits = ctx.config.get_dwise_limits()
        report = verify_dwise(
            space, d, max_length=limits["max_verify_length"], max_degree=limits["max_verify_degree"]
        )
    except Exception as e:
        console.print(f"\n[red]✗ Verification failed:[/] {e}\n")
        sys.exit(1)

    if ctx.json_output:
        emit_json(
            {
                "k": k,
                "t": t,
                "d": d,
                "passed": report.passed,
                "subsets_checked": report.subsets_checked,
                "violation": list(report.violation) if report.violation else None,
            }
        )
    elif report.passed:
        console.print(f"[green]✓[/] {d}-wise independent: {report.subsets_checked} subsets checked (|Omega|={space.size})")
    else:
        console.print(f"[yellow]⚠[/] Not {d}-wise independent: positions {report.violation} are biased")


@dwise.command()
@_K
@_T
@click.option("--max-degree", type=click.IntRange(min=0), help="Highest monomial degree (default: d + 1)")
@click.pass_obj
def gap(ctx: "AppContext", k: int, t: int, max_degree: int | None) -> None:
    """Compare monomial expectations over P and over uniform strings, per degree."""
    console = Console()
    try:
        from services.dwise_service import DWiseSpace, gap_table

        space = DWiseSpace(k, t)
        top = max_degree if max_degree is not None else min(space.d + 1, space.n)
        limits = ctx.config.get_dwise_limits()
        if space.n > limits["max_verify_length"] or top > limits["max_verify_degree"] + 1:
            raise ValueError(
                f"Gap table limited to n <= {limits['max_verify_length']}, "
                f"degree <= {limits['max_verify_degree'] + 1}; got n={space.n}, degree={top}"
            )
        rows = gap_table(space, top)
    except Exception as e:
        console.print(f"\n[red]✗ Gap computation failed:[/] {e}\n")
        sys.exit(1)

    if ctx.json_output:
        emit_json(
            [
                {"degree": r.degree, "monomials": r.monomials, "nonzero": r.nonzero, "max_abs_gap": str(r.max_abs_gap)}
                for r in rows
            ]
        )
        return

    table = Table(title=f"Monomial gaps, n={space.n}, d={space.d}", header_style="bold magenta")
    table.add_column("degree", style="cyan")
    table.add_column("monomials")
    table.add_column("nonzero gap")
    table.add_column("max |gap|")
    for r in rows:
        style = "green" if r.nonzero == 0 else "yellow"
        table.add_row(str(r.degree), str(r.monomials), f"[{style}]{r.nonzero}[/]", str(r.max_abs_gap))
    console.print(table)
