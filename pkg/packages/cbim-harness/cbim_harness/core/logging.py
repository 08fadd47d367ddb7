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
Logging for experiment runs.

Every line reads `LEVEL [logger.name] [YYYY-MM-DD HH:MM:SS±ZZZZ] message`,
with the local timezone offset. While a run is active (see `run_context`) the
message is prefixed with the run tag, e.g. `[mcbim seed=7]`, so interleaved
logs from a train and an evaluate invocation stay attributable. Level names
are colored only when the stream is a terminal.

```python
from cbim_harness.core.logging import get_logger, run_context

logger = get_logger(__name__)

with run_context("mcbim", 7):
    logger.info("Iteration %d done", 3)
# INFO [cbim_harness.training] [2026-01-01 12:00:00+0000] [mcbim seed=7] Iteration 3 done
```
"""

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from datetime import datetime
from typing import TextIO

LOG_FORMAT = "%(levelname)s [%(name)s] [%(asctime)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S%z"

_RESET = "\033[0m"
_LEVEL_COLORS = {
    logging.DEBUG: "\033[36m",
    logging.INFO: "\033[32m",
    logging.WARNING: "\033[33m",
    logging.ERROR: "\033[31m",
    logging.CRITICAL: "\033[35m",
}

_run_tag: ContextVar[str | None] = ContextVar("cbim_run_tag", default=None)


def _supports_color(stream: TextIO) -> bool:
    isatty = getattr(stream, "isatty", None)
    return bool(isatty and isatty())


class RunFormatter(logging.Formatter):
    """Tz-aware timestamps, optional level colors, run tag prefix"""

    def __init__(self, *, color: bool = False):
        super().__init__(LOG_FORMAT, DATE_FORMAT)
        self.color = color

    def formatTime(self, record: logging.LogRecord, datefmt: str | None = None) -> str:  # noqa: N802
        stamp = datetime.fromtimestamp(record.created).astimezone()
        return stamp.strftime(datefmt or DATE_FORMAT)

    def format(self, record: logging.LogRecord) -> str:
        tag = _run_tag.get()
        if not self.color and tag is None:
            return super().format(record)
        # work on a copy; other handlers share the record
        view = logging.makeLogRecord(record.__dict__)
        if tag is not None:
            view.msg = f"[{tag}] {record.getMessage()}"
            view.args = None
        if self.color:
            view.levelname = f"{_LEVEL_COLORS.get(record.levelno, '')}{record.levelname}{_RESET}"
        return super().format(view)


def setup_logging(*, level: int = logging.INFO, stream: TextIO = sys.stderr) -> None:
    """Install one stream handler on the root logger.

    A no-op when the root logger already has handlers, so importing several
    CLIs does not stack output.
    """
    handler = logging.StreamHandler(stream)
    handler.setFormatter(RunFormatter(color=_supports_color(stream)))
    logging.basicConfig(level=level, handlers=[handler])


def set_verbosity(*, verbose: bool) -> None:
    logging.getLogger().setLevel(logging.DEBUG if verbose else logging.INFO)


@contextmanager
def run_context(algorithm: str, seed: int) -> Iterator[str]:
    """Tag every log line emitted inside the block with the run identity"""
    tag = f"{algorithm} seed={seed}"
    token = _run_tag.set(tag)
    try:
        yield tag
    finally:
        _run_tag.reset(token)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
