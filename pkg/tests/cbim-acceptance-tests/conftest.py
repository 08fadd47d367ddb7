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

"""Shared options and fixtures for the acceptance suites.

Every suite here is marked `slow`; run them with `uv run pytest -m slow
tests/cbim-acceptance-tests`. `--learning-seeds` widens or narrows the
learning comparison and `--keep-outputs` keeps run CSVs for inspection.
"""

from collections.abc import Callable
from pathlib import Path

import pytest
from cbim_harness.core.config import ExperimentConfig

# Scenario shared by the learning and scaling suites
SCENARIO = {
    "synthetic_nodes": 200,
    "synthetic_attach": 2,
    "synthetic_seed": 0,
    "k": 2,
    "l": 5,
    "budgets": "3,3",
    "rho": 0.1,
}


def pytest_addoption(parser):
    parser.addoption(
        "--learning-seeds",
        type=int,
        default=5,
        help="Number of master seeds in the learning sanity suite",
    )
    parser.addoption(
        "--keep-outputs",
        action="store",
        default=None,
        help="Directory to keep run CSVs and summaries in instead of a temp dir",
    )


@pytest.fixture(scope="session")
def learning_seeds(request):
    return request.config.getoption("--learning-seeds")


@pytest.fixture
def output_dir(request, tmp_path: Path) -> Path:
    keep = request.config.getoption("--keep-outputs")
    if keep is None:
        return tmp_path
    path = Path(keep) / request.node.name
    path.mkdir(parents=True, exist_ok=True)
    return path


@pytest.fixture
def scenario(output_dir: Path) -> Callable[..., ExperimentConfig]:
    """Build a config for the shared synthetic scenario"""

    def _make(name: str, **changes) -> ExperimentConfig:
        values = {**SCENARIO, "output": str(output_dir / name)}
        values.update(changes)
        return ExperimentConfig(**values)

    return _make
