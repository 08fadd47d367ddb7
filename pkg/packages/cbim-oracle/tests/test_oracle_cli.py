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

from unittest.mock import patch

from click.testing import CliRunner

from cbim_oracle.models import OracleReport
from cbim_oracle.oracle_cli import MISMATCH_EXIT_CODE, oracle_check


def test_passing_suites_exit_zero():
    runner = CliRunner()
    result = runner.invoke(oracle_check, ["--trials", "20", "--suite", "diffusion", "--suite", "auction"])
    assert result.exit_code == 0, result.output
    assert "PASS diffusion: 20 trials" in result.output
    assert "PASS auction k=2 l=2" in result.output


def test_mismatch_exits_nonzero():
    failing = OracleReport(suite="diffusion", trials=1)
    failing.record(0, "activated sets differ", instance={"node_count": 2})
    with patch("cbim_oracle.oracle_cli.run_suites", return_value=[failing]):
        result = CliRunner().invoke(oracle_check, ["--trials", "1"])
    assert result.exit_code == MISMATCH_EXIT_CODE
    assert "FAIL diffusion" in result.output
    assert '"node_count": 2' in result.output


def test_unknown_suite_is_usage_error():
    result = CliRunner().invoke(oracle_check, ["--suite", "nope"])
    assert result.exit_code == 2


def test_version():
    result = CliRunner().invoke(oracle_check, ["--version"])
    assert result.exit_code == 0
    assert "CBIM Oracle" in result.output
