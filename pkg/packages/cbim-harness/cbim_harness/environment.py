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
The bidding environment: one scenario (graph, seeds, budgets, market rules)
plus the state carried between rounds of an iteration.

Per round the environment resolves the auction, diffuses from the sold seeds
(failed seeds are blocked), scores the competitors, measures the seeds'
standalone spreads for the price update and advances every agent's
observation to [last effective prices, leftover budget]. Budgets replenish in
full every round; only prices and observations carry over.
"""

from collections.abc import Sequence
from typing import Literal

import numpy as np
from cbim_market.auction import initial_prices, run_auction
from cbim_market.fairness import fairness_index
from cbim_market.models import AuctionOutcome, AuctionState
from cbim_market.pricing import adjust_prices, contribution_degrees
from cbim_marl.models import JointLayout, Observation
from cbim_network.diffusion import (
    degree_proxy_seed_spreads,
    degree_proxy_spreads,
    diffuse_clt,
)
from cbim_network.graph import sample_thresholds
from cbim_network.models.graph import SeedSet, WeightedGraph
from cbim_network.rng import RngLabel
from pydantic import BaseModel, ConfigDict

from cbim_harness.core.logging import get_logger

logger = get_logger(__name__)

RewardMode = Literal["exact-clt", "degree-proxy"]


class StepResult(BaseModel):
    """Everything a round produced, before it is turned into a record"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    prices: np.ndarray
    auction: AuctionOutcome
    rewards: tuple[int, ...]
    seed_spreads: tuple[int, ...]
    ge: float
    next_prices: np.ndarray


class BiddingEnvironment:
    def __init__(
        self,
        graph: WeightedGraph,
        seeds: SeedSet,
        budgets: Sequence[float],
        *,
        kappa: float,
        omega: float,
        rho: float,
        t_up: int,
        reward_mode: RewardMode = "exact-clt",
    ):
        seeds.validate_for(graph)
        self.graph = graph
        self.seeds = seeds
        self.budgets = np.asarray(budgets, dtype=np.float64)
        self.kappa = kappa
        self.omega = omega
        self.rho = rho
        self.t_up = t_up
        self.reward_mode = reward_mode
        self.layout = JointLayout(competitors=self.budgets.size, seeds=seeds.size)
        self.reset()

    def reset(self) -> None:
        """Start a new iteration: initial prices and empty observations"""
        self.prices = initial_prices(self.budgets, self.seeds.size)
        self.observations = [Observation.initial(self.seeds.size, b) for b in self.budgets]
        self.round_index = 0

    def state(self) -> AuctionState:
        return AuctionState(
            prices=self.prices,
            budgets=self.budgets,
            order=self.seeds,
            round_index=self.round_index,
        )

    def _spreads(
        self, outcome: AuctionOutcome, rng_label: RngLabel
    ) -> tuple[tuple[int, ...], tuple[int, ...]]:
        if self.reward_mode == "degree-proxy":
            return (
                degree_proxy_spreads(self.graph, self.seeds, outcome.allocation),
                degree_proxy_seed_spreads(self.graph, self.seeds),
            )
        thresholds = sample_thresholds(self.graph, rng_label)
        result = diffuse_clt(
            self.graph, thresholds, self.seeds, outcome.allocation, self.t_up, with_seed_spreads=True
        )
        return result.spreads(), result.per_seed_spread

    def step(self, bids: np.ndarray, rng_label: RngLabel) -> StepResult:
        prices = self.prices
        outcome = run_auction(self.state(), bids)
        rewards, seed_spreads = self._spreads(outcome, rng_label)
        ge = fairness_index(rewards, outcome.costs, self.omega)
        cd = contribution_degrees(seed_spreads, self.seeds.size)
        next_prices = adjust_prices(prices, outcome.sold, cd, self.kappa)

        self.prices = next_prices
        self.observations = [
            Observation(g_prev=outcome.effective_prices[i].copy(), rb_prev=float(outcome.remaining[i]))
            for i in range(self.layout.competitors)
        ]
        self.round_index += 1
        return StepResult(
            prices=prices,
            auction=outcome,
            rewards=tuple(int(r) for r in rewards),
            seed_spreads=tuple(seed_spreads),
            ge=ge,
            next_prices=next_prices,
        )
