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

"""
Top-level `cbim` command.

Experiment commands come from the harness, verification commands from the
oracle package; both are mounted directly on this group so `cbim train` and
`cbim oracle-check` work without a sub-group.
"""

import importlib.metadata
import os

import click
from cbim_harness.core.constants import EXIT_DATA, EXIT_NUMERIC, EXIT_USAGE
from cbim_harness.harness_cli import ExitCodeGroup, verbose_option
from cbim_harness.harness_cli import harness as harness_cli
from cbim_oracle.oracle_cli import oracle_check

from . import __version__

COMPONENTS = ("cbim-network", "cbim-market", "cbim-marl", "cbim-oracle", "cbim-harness")

EXPERIMENTS = "Experiments"
VERIFICATION = "Verification"


def logo_color() -> tuple[int, int, int] | int | str:
    """Richest color the terminal advertises"""
    colorterm = os.environ.get("COLORTERM", "").lower()
    if colorterm in ("truecolor", "24bit"):
        return (214, 120, 32)
    if colorterm or "256color" in os.environ.get("TERM", "").lower():
        return 172  # orange in the 256-color palette
    return "yellow"


def component_versions() -> str:
    parts = []
    for name in COMPONENTS:
        try:
            parts.append(f"{name} {importlib.metadata.version(name)}")
        except importlib.metadata.PackageNotFoundError:
            parts.append(f"{name} (not installed)")
    return ", ".join(parts)


class SectionedGroup(ExitCodeGroup):
    """Lists commands under named sections and keeps the logo's line breaks"""

    def __init__(self, *args, **kwargs) -> None:  # noqa: ANN002, ANN003
        super().__init__(*args, **kwargs)
        self.sections: dict[str, list[str]] = {}

    def add_command(self, cmd: click.Command, name: str | None = None, section: str = EXPERIMENTS) -> None:
        super().add_command(cmd, name)
        self.sections.setdefault(section, []).append(name or cmd.name)

    def format_help_text(self, ctx: click.Context, formatter: click.HelpFormatter) -> None:  # noqa: ARG002
        if not self.help:
            return
        formatter.write_paragraph()
        with formatter.indentation():
            for line in self.help.splitlines():
                formatter.write(f"{' ' * formatter.current_indent}{line}\n" if line else "\n")

    def format_commands(self, ctx: click.Context, formatter: click.HelpFormatter) -> None:
        names_shown = [n for names in self.sections.values() for n in names]
        if not names_shown:
            return
        limit = formatter.width - 6 - max(len(n) for n in names_shown)
        for section, names in self.sections.items():
            rows = []
            for name in names:
                command = self.get_command(ctx, name)
                if command is not None and not command.hidden:
                    rows.append((name, command.get_short_help_str(limit)))
            if rows:
                with formatter.section(section):
                    formatter.write_dl(rows)


def cli_help() -> str:
    logo = (
        "     ██████╗ ██████╗  ██╗ ███╗   ███╗\n"
        "    ██╔════╝ ██╔══██╗ ██║ ████╗ ████║\n"
        "    ██║      ██████╔╝ ██║ ██╔████╔██║\n"
        "    ██║      ██╔══██╗ ██║ ██║╚██╔╝██║\n"
        "    ╚██████╗ ██████╔╝ ██║ ██║ ╚═╝ ██║\n"
        "     ╚═════╝ ╚═════╝  ╚═╝ ╚═╝     ╚═╝"
    )
    styled = click.style(logo, fg=logo_color(), bold=True)
    version = click.style(f"v{__version__}", fg="bright_black")
    return f"{styled}\n\nCompetitive bidding influence maximization {version}"


EPILOG = (
    f"Exit codes: 0 success, {EXIT_USAGE} usage or configuration error, "
    f"{EXIT_DATA} unreadable or malformed data, {EXIT_NUMERIC} non-finite parameters during training."
)


@click.group(cls=SectionedGroup, help=cli_help(), epilog=EPILOG)
@click.version_option(
    version=__version__,
    prog_name="CBIM CLI",
    message=f"%(prog)s, version %(version)s\n{component_versions()}",
)
@verbose_option
def cli() -> None:
    """CBIM CLI"""


for command in harness_cli.commands.values():
    cli.add_command(command, section=EXPERIMENTS)
cli.add_command(oracle_check, section=VERIFICATION)
