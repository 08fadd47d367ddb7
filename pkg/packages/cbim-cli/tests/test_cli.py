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

from pathlib import Path

from click.testing import CliRunner

from cbim_cli.cli import COMPONENTS, EXPERIMENTS, VERIFICATION, __version__, cli


def test_cli_version() -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert f"CBIM CLI, version {__version__}" in result.output


def test_cli_help() -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "Competitive bidding influence maximization" in result.output
    for command in ("train", "evaluate", "summarize", "oracle-check", "generate-graph"):
        assert command in result.output


def test_cli_version_lists_components() -> None:
    result = CliRunner().invoke(cli, ["--version"])
    assert result.exit_code == 0
    for name in COMPONENTS:
        assert name in result.output


def test_cli_help_sections() -> None:
    output = CliRunner().invoke(cli, ["--help"]).output
    experiments = output.index("Experiments:")
    verification = output.index("Verification:")
    assert experiments < output.index("  train") < verification
    assert output.index("  oracle-check") > verification
    assert "Exit codes: 0 success" in output
    assert cli.sections == {
        EXPERIMENTS: ["train", "evaluate", "summarize", "generate-graph"],
        VERIFICATION: ["oracle-check"],
    }


def test_unknown_command_is_usage_error() -> None:
    result = CliRunner().invoke(cli, ["bogus"])
    assert result.exit_code == 1


def test_oracle_check_passes() -> None:
    result = CliRunner().invoke(cli, ["oracle-check", "--trials", "20", "--seed", "3", "--suite", "diffusion", "--suite", "auction"])
    assert result.exit_code == 0, result.output
    assert "PASS diffusion" in result.output


def test_train_via_top_level(tmp_path: Path) -> None:
    config = tmp_path / "exp.cfg"
    config.write_text("synthetic_nodes=20\nl=2\niterations=1\nrounds=2\nalgorithm=random\nrecord_wall_time=false\n")
    result = CliRunner().invoke(
        cli, ["train", "--config", str(config), "--seed", "5", "--output", str(tmp_path / "run")]
    )
    assert result.exit_code == 0, result.output
    assert (tmp_path / "run.csv").exists()


def test_missing_config_exit_code(tmp_path: Path) -> None:
    result = CliRunner().invoke(cli, ["train", "--config", str(tmp_path / "none.cfg"), "--seed", "1"])
    assert result.exit_code == 1
