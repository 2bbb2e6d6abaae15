"""qpt CLI - Modular command-line interface for the property-testing lab."""

import importlib
import logging
import pkgutil
import sys
from pathlib import Path

import rich_click as click
from dotenv import load_dotenv
from rich.console import Console

from services.app_context import AppContext

# Configure rich-click for beautiful output
click.rich_click.USE_RICH_MARKUP = True
click.rich_click.USE_MARKDOWN = True
click.rich_click.SHOW_ARGUMENTS = True
click.rich_click.GROUP_ARGUMENTS_OPTIONS = True
click.rich_click.STYLE_ERRORS_SUGGESTION = "magenta italic"
click.rich_click.ERRORS_SUGGESTION = "Try running the '--help' flag for more information."
click.rich_click.ERRORS_EPILOGUE = ""
click.rich_click.SHOW_METAVARS_COLUMN = True
click.rich_click.APPEND_METAVARS_HELP = True
click.rich_click.STYLE_OPTION = "bold cyan"
click.rich_click.STYLE_ARGUMENT = "bold cyan"
click.rich_click.STYLE_COMMAND = "bold cyan"
click.rich_click.STYLE_SWITCH = "bold green"
click.rich_click.STYLE_METAVAR = "bold yellow"
click.rich_click.STYLE_HEADER_TEXT = "bold magenta"
click.rich_click.STYLE_USAGE = "bold yellow"
click.rich_click.STYLE_HELPTEXT_FIRST_LINE = "bold"
click.rich_click.STYLE_HELPTEXT = "dim"
click.rich_click.STYLE_OPTION_DEFAULT = "dim"
click.rich_click.ALIGN_OPTIONS_PANEL = "left"
click.rich_click.ALIGN_COMMANDS_PANEL = "left"

# Load environment variables (QPT_SEED and friends) before config is read
load_dotenv()

console = Console()

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@click.group()
@click.version_option(version="0.1.0", prog_name="qpt")
@click.option("--seed", type=click.IntRange(0, (1 << 64) - 1), help="Master seed (overrides QPT_SEED/config)")
@click.option("--trials", type=click.IntRange(min=1), help="Trials per configuration")
@click.option("--workers", type=click.IntRange(min=1), help="Worker processes for trials")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write trial records as JSON Lines")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), help="Write the CSV projection")
@click.option("--json", "json_output", is_flag=True, help="Machine-readable JSON on stdout")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.pass_context
def cli(
    ctx: click.Context,
    seed: int | None,
    trials: int | None,
    workers: int | None,
    out: Path | None,
    csv_path: Path | None,
    json_output: bool,
    debug: bool,
) -> None:
    """qpt - Quantum property testing laboratory.

    Simulates classical and quantum property testers (Hadamard-code
    membership, Simon's promise language, d-wise independent spaces) and
    runs seeded, reproducible experiments over them.
    """
    ctx.ensure_object(dict)
    try:
        app = AppContext.create()
        level = "DEBUG" if debug else app.config.get_log_level()
    except Exception as e:
        console.print(f"[red]✗ Error loading configuration:[/] {e}")
        sys.exit(1)

    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT)
    if debug and not json_output:
        console.print("[yellow]Debug mode enabled[/]", highlight=False)

    app.seed = seed
    app.trials = trials
    app.workers = workers
    app.out = out
    app.csv = csv_path
    app.json_output = json_output
    ctx.obj = app


def load_commands() -> None:
    """Auto-load command modules from the cli package.

    Every public module in ``cli/`` lists its click commands in ``__all__``;
    those are registered with the root group.
    """
    cli_dir = Path(__file__).parent

    for _, module_name, is_pkg in pkgutil.iter_modules([str(cli_dir)]):
        if module_name.startswith("_") or is_pkg:
            continue

        try:
            module = importlib.import_module(f"cli.{module_name}")
            for attr_name in getattr(module, "__all__", []):
                attr = getattr(module, attr_name)
                if isinstance(attr, click.Command) and attr is not cli:
                    cli.add_command(attr)
        except Exception as e:
            console.print(f"[yellow]Warning: Failed to load command module '{module_name}': {e}[/]")


load_commands()
