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

import io
import logging

from cbim_harness.core.logging import RunFormatter, run_context


def _record(msg: str, *args: object, level: int = logging.INFO) -> logging.LogRecord:
    return logging.LogRecord("cbim_harness.training", level, __file__, 1, msg, args, None)


def test_plain_line_layout():
    line = RunFormatter().format(_record("Iteration %d done", 3))
    level, name, rest = line.split(" ", 2)
    assert level == "INFO"
    assert name == "[cbim_harness.training]"
    assert rest.endswith("] Iteration 3 done")
    assert "\033[" not in line


def test_run_tag_prefixes_message_inside_context_only():
    formatter = RunFormatter()
    with run_context("mcbim", 7) as tag:
        assert tag == "mcbim seed=7"
        inside = formatter.format(_record("Iteration %d done", 3))
    outside = formatter.format(_record("Iteration %d done", 3))
    assert inside.endswith("] [mcbim seed=7] Iteration 3 done")
    assert "seed=7" not in outside


def test_color_does_not_leak_into_shared_record():
    record = _record("boom", level=logging.ERROR)
    colored = RunFormatter(color=True).format(record)
    assert colored.startswith("\033[31mERROR\033[0m")
    assert record.levelname == "ERROR"
    assert RunFormatter().format(record).startswith("ERROR ")


def test_handler_output_through_logger():
    stream = io.StringIO()
    handler = logging.StreamHandler(stream)
    handler.setFormatter(RunFormatter())
    logger = logging.getLogger("cbim_harness.tests.logging")
    logger.addHandler(handler)
    logger.propagate = False
    try:
        with run_context("random", 1):
            logger.warning("budget %s", "3,3")
    finally:
        logger.removeHandler(handler)
    assert stream.getvalue().rstrip().endswith("[random seed=1] budget 3,3")
