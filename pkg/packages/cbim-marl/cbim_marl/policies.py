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

from collections.abc import Sequence
from typing import Protocol

import numpy as np

from cbim_marl.models import Observation, Transition
from cbim_network.rng import RngLabel

RANDOM_POLICY_STREAM = "random-policy"


class BiddingPolicy(Protocol):
    """What the round loop needs from a set of k bidders"""

    def act(
        self, observations: Sequence[Observation], noise_std: float, rng_label: RngLabel
    ) -> np.ndarray: ...

    def observe(self, transition: Transition, rng_label: RngLabel) -> bool: ...


def random_policy(budget: float, l: int, rng_label: RngLabel, agent: int = 0) -> np.ndarray:
    """l i.i.d. bids drawn uniformly from [0, budget]"""
    return rng_label.generator(RANDOM_POLICY_STREAM, agent).uniform(0.0, budget, l)


class RandomBidders:
    """Baseline: every agent bids uniformly at random and never learns"""

    def __init__(self, budgets: Sequence[float], seeds: int):
        self.budgets = [float(b) for b in budgets]
        self.seeds = seeds

    def act(
        self,
        observations: Sequence[Observation],  # noqa: ARG002
        noise_std: float,  # noqa: ARG002
        rng_label: RngLabel,
    ) -> np.ndarray:
        return np.stack(
            [random_policy(b, self.seeds, rng_label, agent=i) for i, b in enumerate(self.budgets)]
        )

    def observe(self, transition: Transition, rng_label: RngLabel) -> bool:  # noqa: ARG002
        return False
