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

import json
import logging
import sys

import click

from cbim_oracle.suites import SUITES, run_suites

from . import __version__

logger = logging.getLogger(__name__)

MISMATCH_EXIT_CODE = 1
SHOWN_MISMATCHES = 5


def cli_help() -> str:
    """Return help string for the CLI"""
    version_str = click.style(f"v{__version__}", fg="bright_black")
    return f"CBIM brute-force oracle checks {version_str}"


@click.command(name="oracle-check", help=cli_help())
@click.version_option(version=__version__, prog_name="CBIM Oracle")
@click.option("--trials", default=1000, show_default=True, type=click.IntRange(min=1), help="Random trials per suite.")
@click.option("--seed", default=0, show_default=True, type=click.IntRange(min=0), help="Master seed for the oracle streams.")
@click.option(
    "--suite",
    "suites",
    multiple=True,
    type=click.Choice(list(SUITES)),
    help="Suite to run (repeatable; defaults to all).",
)
def oracle_check(trials: int, seed: int, suites: tuple[str, ...]):
    """Run the brute-force oracle suites and report mismatches"""
    reports = run_suites(list(suites or SUITES), trials, seed)
    for report in reports:
        line = report.summary_line()
        click.echo(click.style(line, fg="green" if report.passed else "red"))
        for mismatch in report.mismatches[:SHOWN_MISMATCHES]:
            click.echo(f"  trial {mismatch.trial}: {mismatch.detail}")
            click.echo(f"    replay: {json.dumps(mismatch.inputs, default=str)}")
    if not all(report.passed for report in reports):
        sys.exit(MISMATCH_EXIT_CODE)
