"""Test commands - Run a single tester on one input over seeded trials."""

import sys
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
import rich_click as click
from rich.console import Console

from cli._output import emit_json, persist_records, summaries_payload, summary_table

if TYPE_CHECKING:
    from models.bits import BitString, BooleanFunction
    from services.app_context import AppContext
    from services.experiment_service import TrialSpec

__all__ = ["test"]


def _input_kind(input_path: Path | None, sample_member: bool, sample_far: bool) -> str:
    flags = (("--input", input_path), ("--sample-member", sample_member), ("--sample-far", sample_far))
    chosen = [flag for flag, on in flags if on]
    if len(chosen) > 1:
        raise click.UsageError(f"Options {' and '.join(chosen)} are mutually exclusive")
    if input_path is not None:
        return "given"
    return "far" if sample_far else "member"


def _specs(
    ctx: "AppContext",
    experiment: str,
    config: str,
    n: int,
    eps: float,
    mode: str,
    kind: str,
    **extra: object,
) -> list["TrialSpec"]:
    from services.experiment_service import TRIAL_STREAM, TrialSpec, derive_seed

    seed = ctx.effective_seed
    return [
        TrialSpec(
            experiment=experiment,
            config=config,
            trial=t,
            n=n,
            eps=eps,
            mode=mode,
            input_kind=kind,
            seed=derive_seed(seed, TRIAL_STREAM, 0, t),
            record_timing=ctx.config.get_record_timing(),
            **extra,  # type: ignore[arg-type]
        )
        for t in range(ctx.effective_trials)
    ]


def _run_and_report(
    ctx: "AppContext",
    specs: list["TrialSpec"],
    title: str,
    console: Console,
    exact: dict[str, float] | None = None,
) -> None:
    from services.experiment_service import run_trials, summarize

    records = run_trials(specs, ctx.effective_workers, ctx.config.get_batch_size())
    summaries = summarize(records)
    persist_records(ctx, records, console)

    if ctx.json_output:
        emit_json({"summaries": summaries_payload(summaries), "exact": exact or {}})
        return
    console.print()
    console.print(summary_table(title, summaries))
    for name, value in (exact or {}).items():
        console.print(f"  {name}: [yellow]{value:.6f}[/]")
    console.print()


@click.group()
def test() -> None:
    """Run one tester repeatedly on a member, far or given input."""


@test.command()
@click.option("--n", "length", type=int, required=True, help="Input length (power of two >= 2)")
@click.option("--eps", type=click.FloatRange(0, 1, min_open=True, max_open=True), required=True, help="Distance parameter")
@click.option(
    "--a-file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Allowed messages, one log n-bit label per line (default: random half)",
)
@click.option(
    "--mode",
    type=click.Choice(["classical", "quantum", "generic"]),
    default="quantum",
    show_default=True,
    help="Tester to run",
)
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Truth-table file holding x")
@click.option("--sample-member", is_flag=True, help="Draw a codeword h(y), y in A, per trial (default)")
@click.option("--sample-far", is_flag=True, help="Draw an eps-far input per trial")
@click.pass_obj
def hadamard(
    ctx: "AppContext",
    length: int,
    eps: float,
    a_file: Path | None,
    mode: str,
    input_path: Path | None,
    sample_member: bool,
    sample_far: bool,
) -> None:
    """Test membership in P_A = {h(y) : y in A}.

    With a given input the exact acceptance/rejection probabilities are
    reported next to the empirical rates.
    """
    kind = _input_kind(input_path, sample_member, sample_far)
    console = Console()

    try:
        from models.bits import BitString
        from models.tester import default_blr_rounds
        from services.experiment_service import SETUP_STREAM, choose_a, derive_seed
        from services.hadamard_tester_service import (
            classical_acceptance_probability,
            quantum_rejection_probability,
        )
        from utils.f2_utils import log2_exact
        from utils.truth_table_utils import load_a_set, load_truth_table

        if length < 2:
            raise ValueError(f"n must be a power of two >= 2, got {length}")
        m = log2_exact(length)
        if a_file is not None:
            a_values = tuple(sorted(y.value for y in load_a_set(a_file, m=m)))
        else:
            a_values = choose_a(m, derive_seed(ctx.effective_seed, SETUP_STREAM, 0))
        if not a_values:
            raise ValueError("A must be nonempty")

        input_value = None
        exact: dict[str, float] = {}
        if kind == "given":
            assert input_path is not None
            x = load_truth_table(input_path).table
            if x.length != length:
                raise ValueError(f"Input has length {x.length}, expected {length}")
            input_value = x.value
            A = [BitString(v, m) for v in a_values]
            rounds = default_blr_rounds(eps, ctx.config.get_blr_multiplier())
            exact = {
                "exact quantum rejection": quantum_rejection_probability(x, A, rounds),
                "exact classical acceptance": classical_acceptance_probability(x, A, rounds),
            }

        specs = _specs(
            ctx,
            "test-hadamard",
            f"n={length},eps={eps}",
            length,
            eps,
            mode,
            kind,
            a_values=a_values,
            input_value=input_value,
            settings={
                "blr_multiplier": ctx.config.get_blr_multiplier(),
                "generic_constant": ctx.config.get_generic_constant(),
            },
        )
        if not ctx.json_output:
            console.print(f"\n[bold]Hadamard tester[/] mode=[cyan]{mode}[/] |A|=[cyan]{len(a_values)}[/] input=[cyan]{kind}[/]")
        _run_and_report(ctx, specs, f"P_A, n={length}", console, exact)
    except Exception as e:
        console.print(f"\n[red]✗ Hadamard test failed:[/] {e}\n")
        sys.exit(1)


@test.command()
@click.option("--n", "n", type=click.IntRange(1, 10), required=True, help="Domain bits (input length 2^n)")
@click.option("--eps", type=click.FloatRange(0, 1, min_open=True, max_open=True), required=True, help="Distance parameter")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Truth-table file holding f")
@click.option("--sample-member", is_flag=True, help="Draw f from the paired distribution per trial (default)")
@click.option("--sample-far", is_flag=True, help="Draw f at distance >= N/8 from L per trial")
@click.option("--exact", is_flag=True, help="Also compute the exact acceptance probability (small n)")
@click.pass_obj
def simon(
    ctx: "AppContext",
    n: int,
    eps: float,
    input_path: Path | None,
    sample_member: bool,
    sample_far: bool,
    exact: bool,
) -> None:
    """Test membership in L = {f : f(x) = f(x xor s) for some s != 0}.

    `--exact` branches over every measurement outcome; without a given input
    it analyzes one input drawn from the setup stream.
    """
    kind = _input_kind(input_path, sample_member, sample_far)
    console = Console()

    try:
        from services.experiment_service import SETUP_STREAM, derive_seed
        from services.simon_tester_service import (
            acceptance_probability,
            distance_to_L,
            sample_far_function,
            sample_P,
        )
        from utils.truth_table_utils import load_truth_table

        input_value = None
        f: BooleanFunction | None = None
        if kind == "given":
            assert input_path is not None
            f = load_truth_table(input_path)
            if f.n != n:
                raise ValueError(f"Input has n={f.n}, expected {n}")
            input_value = f.table.value

        multiplier = ctx.config.get_repetition_multiplier()
        exact_rows: dict[str, float] = {}
        if exact:
            if f is None:
                rng = np.random.default_rng(derive_seed(ctx.effective_seed, SETUP_STREAM, 0))
                f = sample_P(n, rng).f if kind == "member" else sample_far_function(n, max(1, (1 << n) // 8), rng)
            exact_rows = {
                "exact acceptance": acceptance_probability(f, eps, multiplier, ctx.config.get_exact_max_n()),
                "distance to L": float(distance_to_L(f)),
            }

        specs = _specs(
            ctx,
            "test-simon",
            f"n={n},eps={eps}",
            n,
            eps,
            "simon",
            kind,
            input_value=input_value,
            settings={
                "repetition_multiplier": multiplier,
                "reuse_prepared_state": ctx.config.get_reuse_prepared_state(),
            },
        )
        if not ctx.json_output:
            console.print(f"\n[bold]Simon tester[/] n=[cyan]{n}[/] input=[cyan]{kind}[/]")
        _run_and_report(ctx, specs, f"L, n={n}", console, exact_rows)
    except Exception as e:
        console.print(f"\n[red]✗ Simon test failed:[/] {e}\n")
        sys.exit(1)


@test.command(name="dwise")
@click.option("--k", type=click.IntRange(1, 16), required=True, help="Field degree (n = 2^k - 1)")
@click.option("--t", type=click.IntRange(min=1), required=True, help="Independence parameter (d = 2t + 1)")
@click.option("--eps", type=click.FloatRange(0, 1, min_open=True, max_open=True), required=True, help="Distance parameter")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Truth-table file holding x (length 2^m >= n, first n bits used)")
@click.option("--sample-member", is_flag=True, help="Draw a member per trial (default)")
@click.option("--sample-far", is_flag=True, help="Draw an eps-far input per trial")
@click.pass_obj
def dwise_test(
    ctx: "AppContext",
    k: int,
    t: int,
    eps: float,
    input_path: Path | None,
    sample_member: bool,
    sample_far: bool,
) -> None:
    """Run the generic O(log|P| / eps) tester against a d-wise independent property."""
    kind = _input_kind(input_path, sample_member, sample_far)
    console = Console()

    try:
        from services.dwise_service import DWiseSpace
        from utils.truth_table_utils import load_truth_table

        space = DWiseSpace(k, t)

        input_value = None
        if kind == "given":
            assert input_path is not None
            x: BitString = load_truth_table(input_path).table
            if x.length < space.n:
                raise ValueError(f"Input has length {x.length}, need at least {space.n}")
            input_value = x.value & ((1 << space.n) - 1)

        specs = _specs(
            ctx,
            "test-dwise",
            f"k={k},t={t},eps={eps}",
            space.n,
            eps,
            "dwise",
            kind,
            input_value=input_value,
            settings={
                "k": k,
                "t": t,
                "generic_constant": ctx.config.get_generic_constant(),
                "max_property_length": ctx.config.get_dwise_limits()["max_property_length"],
            },
        )
        if not ctx.json_output:
            console.print(f"\n[bold]d-wise tester[/] n=[cyan]{space.n}[/] d=[cyan]{space.d}[/] input=[cyan]{kind}[/]")
        _run_and_report(ctx, specs, f"d-wise, k={k}, t={t}", console)
    except Exception as e:
        console.print(f"\n[red]✗ d-wise test failed:[/] {e}\n")
        sys.exit(1)
