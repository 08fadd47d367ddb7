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

import logging
from collections.abc import Callable

from cbim_oracle.auction import DEFAULT_GRID, enumerate_auction
from cbim_oracle.diffusion import check_diffusion, check_monotonicity
from cbim_oracle.gradients import check_network_gradients
from cbim_oracle.models import OracleReport

logger = logging.getLogger(__name__)

GRADIENT_NETWORKS = 100
MONOTONICITY_TRIALS = 500


def diffusion_suite(trials: int, master_seed: int) -> list[OracleReport]:
    return [check_diffusion(trials, master_seed)]


def monotonicity_suite(trials: int, master_seed: int) -> list[OracleReport]:
    return [check_monotonicity(max(trials, MONOTONICITY_TRIALS), master_seed)]


def auction_suite(trials: int, master_seed: int) -> list[OracleReport]:  # noqa: ARG001
    return [
        enumerate_auction([1.0, 1.0], [3.0, 3.0], DEFAULT_GRID),
        enumerate_auction([1.0, 1.0], [3.0, 3.0, 3.0], DEFAULT_GRID),
        enumerate_auction([1.0, 1.0], [1.6, 3.0], DEFAULT_GRID),
    ]


def gradient_suite(trials: int, master_seed: int) -> list[OracleReport]:
    return check_network_gradients(min(trials, GRADIENT_NETWORKS), master_seed)


SUITES: dict[str, Callable[[int, int], list[OracleReport]]] = {
    "diffusion": diffusion_suite,
    "monotonicity": monotonicity_suite,
    "auction": auction_suite,
    "gradients": gradient_suite,
}


def run_suites(names: list[str], trials: int, master_seed: int) -> list[OracleReport]:
    reports = []
    for name in names:
        logger.info("Running oracle suite %s", name)
        reports.extend(SUITES[name](trials, master_seed))
    return reports
