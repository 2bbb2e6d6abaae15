"""Experiment commands - Seeded grids of tester runs and the decision-tree bias estimate."""

import sys
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from typing import TYPE_CHECKING

import rich_click as click
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from cli._output import emit_json, persist_records, summaries_payload, summary_table

if TYPE_CHECKING:
    from services.app_context import AppContext

__all__ = ["experiment"]


def _int_list(_ctx: click.Context, _param: click.Parameter, value: str) -> list[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from e


def _float_list(_ctx: click.Context, _param: click.Parameter, value: str) -> list[float]:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}") from e


@contextmanager
def _progress(console: Console, total: int, enabled: bool) -> Iterator[Callable[[int], None] | None]:
    if not enabled:
        yield None
        return
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console,
    ) as progress:
        task = progress.add_task("Running trials...", total=total)
        yield lambda done: progress.advance(task, done)


@click.group()
def experiment() -> None:
    """Seeded experiments; records go to --out/--csv, summaries to stdout."""


@experiment.command()
@click.option("--lengths", callback=_int_list, default="8,16,32,64", show_default=True, help="Input lengths n")
@click.option("--epsilons", callback=_float_list, default="0.1", show_default=True, help="Distance parameters")
@click.option(
    "--modes",
    type=click.Choice(["classical", "quantum", "generic"]),
    multiple=True,
    default=("classical", "quantum"),
    show_default=True,
    help="Testers to compare",
)
@click.pass_obj
def separation(ctx: "AppContext", lengths: list[int], epsilons: list[float], modes: tuple[str, ...]) -> None:
    """Classical vs quantum query counts and acceptance rates for P_A.

    The quantum count stays at 3k + 1 for every n while the classical count
    is log n + k.
    """
    from services.experiment_service import run_separation_hadamard

    console = Console()
    trials = ctx.effective_trials
    total = len(lengths) * len(epsilons) * len(modes) * 2 * trials
    try:
        with _progress(console, total, not ctx.json_output) as progress:
            result = run_separation_hadamard(
                lengths,
                epsilons,
                trials,
                ctx.effective_seed,
                workers=ctx.effective_workers,
                batch_size=ctx.config.get_batch_size(),
                modes=modes,
                blr_multiplier=ctx.config.get_blr_multiplier(),
                record_timing=ctx.config.get_record_timing(),
                progress=progress,
            )
        persist_records(ctx, result.records, console)
    except Exception as e:
        console.print(f"\n[red]✗ Separation experiment failed:[/] {e}\n")
        sys.exit(1)

    if ctx.json_output:
        emit_json(summaries_payload(result.summaries))
    else:
        console.print(
            summary_table(
                "Separation: P_A testers",
                result.summaries,
                extra_columns=("short_reader_accuracy",),
            )
        )


@experiment.command()
@click.option("--n", "n", type=click.IntRange(1, 8), default=6, show_default=True, help="Domain bits")
@click.option("--depth", type=click.IntRange(min=0), default=5, show_default=True, help="Queries per strategy")
@click.option("--strategies", type=click.IntRange(min=1), default=100, show_default=True, help="Random decision trees")
@click.option("--samples", type=click.IntRange(min=1), default=10_000, show_default=True, help="Samples per distribution")
@click.pass_obj
def bias(ctx: "AppContext", n: int, depth: int, strategies: int, samples: int) -> None:
    """Largest acceptance gap of random depth-q strategies between paired and uniform functions."""
    from services.experiment_service import run_bias_experiment

    console = Console()
    try:
        if not ctx.json_output:
            with console.status("[bold]Evaluating strategies...[/]"):
                summary = run_bias_experiment(n, depth, strategies, samples, ctx.effective_seed)
        else:
            summary = run_bias_experiment(n, depth, strategies, samples, ctx.effective_seed)
    except Exception as e:
        console.print(f"\n[red]✗ Bias experiment failed:[/] {e}\n")
        sys.exit(1)

    if ctx.json_output:
        emit_json(summary.model_dump(mode="json"))
        return

    table = Table(title=f"Bias: n={n}, q={depth}", header_style="bold magenta")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="yellow")
    extra = summary.extra
    table.add_row("max bias", f"{extra['max_bias']:.4f}")
    table.add_row("mean bias", f"{extra['mean_bias']:.4f}")
    table.add_row("worst strategy", str(extra["worst_strategy"]))
    table.add_row("accept rate (paired)", f"{summary.accept_rate:.4f} [{summary.ci_low:.4f}, {summary.ci_high:.4f}]")
    table.add_row("accept rate (uniform)", f"{extra['accept_rate_uniform']:.4f}")
    table.add_row("path collision rate", f"{extra['collision_rate']:.4f}")
    table.add_row("collision bound", f"{extra['collision_bound']:.4f}")
    console.print(table)


@experiment.command(name="simon-scaling")
@click.option("--ns", callback=_int_list, default="2,3,4,5", show_default=True, help="Domain bit counts")
@click.option("--eps", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=0.125, show_default=True)
@click.option("--far", is_flag=True, help="Also run inputs at distance >= N/8 from L")
@click.pass_obj
def simon_scaling(ctx: "AppContext", ns: list[int], eps: float, far: bool) -> None:
    """Oracle invocations of the Simon tester against the n * L bound."""
    from services.experiment_service import run_simon_query_scaling

    console = Console()
    kinds = ("member", "far") if far else ("member",)
    trials = ctx.effective_trials
    try:
        with _progress(console, len(ns) * len(kinds) * trials, not ctx.json_output) as progress:
            result = run_simon_query_scaling(
                ns,
                eps,
                trials,
                ctx.effective_seed,
                workers=ctx.effective_workers,
                batch_size=ctx.config.get_batch_size(),
                input_kinds=kinds,
                repetition_multiplier=ctx.config.get_repetition_multiplier(),
                reuse_prepared_state=ctx.config.get_reuse_prepared_state(),
                record_timing=ctx.config.get_record_timing(),
                progress=progress,
            )
        persist_records(ctx, result.records, console)
    except Exception as e:
        console.print(f"\n[red]✗ Simon scaling experiment failed:[/] {e}\n")
        sys.exit(1)

    if ctx.json_output:
        emit_json(summaries_payload(result.summaries))
    else:
        console.print(
            summary_table(
                "Simon tester scaling",
                result.summaries,
                extra_columns=("repetition_limit", "query_bound", "high_agreement_rate"),
            )
        )
