# Copyright 2026 The CBIM Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import sys
from pathlib import Path
from typing import NoReturn

import click
from cbim_market.errors import AuctionError
from cbim_marl.errors import CheckpointError, LearningError, NumericFailureError
from cbim_network.errors import GraphError
from cbim_network.graph import generate_preferential_attachment
from cbim_network.parsers.edge_list import EdgeListParseError, write_edge_list

from cbim_harness.core.config import ConfigError, load_config, parse_overrides
from cbim_harness.core.constants import EXIT_DATA, EXIT_NUMERIC, EXIT_USAGE
from cbim_harness.core.logging import get_logger, set_verbosity, setup_logging
from cbim_harness.metrics import format_summary, summarize
from cbim_harness.records import RecordFormatError, read_records
from cbim_harness.training import evaluate as run_evaluation
from cbim_harness.training import train as run_training

from . import __version__

setup_logging()
logger = get_logger(__name__)

DATA_ERRORS = (
    FileNotFoundError,
    IsADirectoryError,
    EdgeListParseError,
    GraphError,
    CheckpointError,
    RecordFormatError,
)
USAGE_ERRORS = (ConfigError, AuctionError, LearningError)


def _fail(message: str, code: int) -> NoReturn:
    click.echo(click.style(f"Error: {message}", fg="red"), err=True)
    sys.exit(code)


class ExitCodeGroup(click.Group):
    """click.Group that maps failures onto the documented exit codes.

    Usage and config errors exit 1, data errors (missing or malformed inputs,
    bad checkpoints) exit 2 and non-finite network parameters exit 3.
    """

    def main(self, *args, **kwargs):  # noqa: ANN002, ANN003, ANN201
        kwargs["standalone_mode"] = False
        try:
            code = super().main(*args, **kwargs)
        except click.exceptions.Abort:
            _fail("aborted", EXIT_USAGE)
        except click.ClickException as exc:
            exc.show()
            sys.exit(EXIT_USAGE)
        except NumericFailureError as exc:
            _fail(str(exc), EXIT_NUMERIC)
        except USAGE_ERRORS as exc:
            _fail(str(exc), EXIT_USAGE)
        except DATA_ERRORS as exc:
            _fail(str(exc), EXIT_DATA)
        if isinstance(code, int) and code:
            sys.exit(code)
        return code


def cli_help() -> str:
    """Return help string for the CLI"""
    version_str = click.style(f"v{__version__}", fg="bright_black")
    return f"CBIM experiment harness {version_str}"


def _verbose(ctx: click.Context, param: click.Parameter, value: bool) -> None:  # noqa: ARG001, FBT001
    if value:
        set_verbosity(verbose=True)


verbose_option = click.option(
    "--verbose",
    "-v",
    is_flag=True,
    expose_value=False,
    is_eager=True,
    callback=_verbose,
    help="Log at DEBUG level.",
)


@click.group(cls=ExitCodeGroup, help=cli_help())
@click.version_option(version=__version__, prog_name="CBIM Harness")
@verbose_option
def harness():
    """CBIM experiment harness"""
    pass


def _overrides(pairs: tuple[str, ...], **flags: object) -> dict[str, object]:
    values: dict[str, object] = dict(parse_overrides(pairs))
    values.update({key: value for key, value in flags.items() if value is not None})
    return values


@harness.command()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Flat key=value experiment config file.",
)
@click.option("--seed", required=True, type=click.IntRange(min=0), help="Master seed.")
@click.option("--output", default=None, help="Output prefix for .csv, .summary.txt and .ckpt.")
@click.option(
    "--algorithm",
    default=None,
    type=click.Choice(["mcbim", "iddpg", "random"]),
    help="Bidding algorithm (overrides the config file).",
)
@click.option("--set", "pairs", multiple=True, metavar="KEY=VALUE", help="Override a config key (repeatable).")
@verbose_option
def train(config_path: Path, seed: int, output: str | None, algorithm: str | None, pairs: tuple[str, ...]):
    """Train bidding policies and write the episode CSV, summary and checkpoint."""
    config = load_config(config_path, _overrides(pairs, seed=seed, output=output, algorithm=algorithm))
    result = run_training(config)
    click.echo(format_summary(result.summary))
    click.echo(f"Wrote {result.csv_path} and {result.summary_path}")
    if result.checkpoint_path is not None:
        click.echo(f"Wrote {result.checkpoint_path}")


@harness.command()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Flat key=value experiment config file.",
)
@click.option(
    "--checkpoint",
    "checkpoint_path",
    required=True,
    type=click.Path(path_type=Path),
    help="Checkpoint written by train.",
)
@click.option("--seed", required=True, type=click.IntRange(min=0), help="Master seed.")
@click.option("--output", default=None, help="Output prefix for .csv and .summary.txt.")
@click.option("--set", "pairs", multiple=True, metavar="KEY=VALUE", help="Override a config key (repeatable).")
@verbose_option
def evaluate(config_path: Path, checkpoint_path: Path, seed: int, output: str | None, pairs: tuple[str, ...]):
    """Replay a checkpoint with frozen parameters and no exploration noise."""
    config = load_config(config_path, _overrides(pairs, seed=seed, output=output))
    result = run_evaluation(config, checkpoint_path)
    click.echo(format_summary(result.summary))
    click.echo(f"Wrote {result.csv_path} and {result.summary_path}")


@harness.command(name="summarize")
@click.argument("csv_path", type=click.Path(dir_okay=False, path_type=Path))
@click.option(
    "--rho",
    required=True,
    type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
    help="Fairness threshold: an episode is fair when GE <= rho.",
)
@click.option(
    "--sr-mode",
    default="sold-and-fair",
    show_default=True,
    type=click.Choice(["sold-only", "sold-and-fair"]),
    help="What counts as a win-win episode.",
)
@click.option("--budgets", default=None, help="Comma-separated budgets for CR_i (default: the CSV's).")
@verbose_option
def summarize_csv(csv_path: Path, rho: float, sr_mode: str, budgets: str | None):
    """Print the summary metrics of an episode CSV."""
    budget_values = None
    if budgets is not None:
        try:
            budget_values = [float(b) for b in budgets.split(",")]
        except ValueError as exc:
            raise click.BadParameter(f"expected comma-separated numbers, got {budgets!r}") from exc
    records = read_records(csv_path)
    if budget_values is not None and len(budget_values) != records[0].competitors:
        raise click.BadParameter(f"expected {records[0].competitors} budgets, got {len(budget_values)}")
    click.echo(format_summary(summarize(records, rho, sr_mode, budget_values)))


@harness.command(name="generate-graph")
@click.option("--nodes", required=True, type=click.IntRange(min=2), help="Number of nodes.")
@click.option("--attach", default=2, show_default=True, type=click.IntRange(min=1), help="Edges per new node.")
@click.option("--seed", default=0, show_default=True, type=click.IntRange(min=0), help="Generator seed.")
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Edge-list file to write.")
@verbose_option
def generate_graph(nodes: int, attach: int, seed: int, out: Path):
    """Write a synthetic preferential-attachment graph as a SNAP edge list."""
    if attach >= nodes:
        raise click.BadParameter(f"--attach must be below --nodes ({nodes}), got {attach}")
    graph = generate_preferential_attachment(nodes, attach, seed=seed)
    write_edge_list(graph, out)
    logger.info("Wrote %d nodes and %d undirected edges to %s", graph.node_count, graph.edge_count // 2, out)
    click.echo(f"Wrote {out}")
