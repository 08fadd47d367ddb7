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

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from cbim_network.models.diffusion import Allocation
from cbim_network.models.graph import SeedSet


def _positive_vector(value: np.ndarray, name: str) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    if array.ndim != 1 or array.size == 0 or np.any(array <= 0) or not np.all(np.isfinite(array)):
        raise ValueError(f"{name} must be a non-empty vector of finite values > 0")
    array.setflags(write=False)
    return array


class AuctionState(BaseModel):
    """Starting prices and budgets for one bidding round.

    `prices[j]` belongs to `order.seeds[j]`; budgets are the full per-round
    budgets b_i (they replenish every round).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    prices: np.ndarray
    budgets: np.ndarray
    order: SeedSet
    round_index: int = Field(0, ge=0)

    @field_validator("prices")
    @classmethod
    def _check_prices(cls, value: np.ndarray) -> np.ndarray:
        return _positive_vector(value, "prices")

    @field_validator("budgets")
    @classmethod
    def _check_budgets(cls, value: np.ndarray) -> np.ndarray:
        return _positive_vector(value, "budgets")

    @property
    def competitors(self) -> int:
        return int(self.budgets.size)

    @property
    def seed_count(self) -> int:
        return int(self.prices.size)


class AuctionOutcome(BaseModel):
    """Result of auctioning every seed once, in order"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    winner: tuple[int | None, ...]
    payment: np.ndarray
    effective: np.ndarray
    effective_prices: np.ndarray
    costs: np.ndarray
    remaining: np.ndarray

    @property
    def competitors(self) -> int:
        return int(self.costs.size)

    @property
    def sold(self) -> np.ndarray:
        return np.array([w is not None for w in self.winner])

    @property
    def all_sold(self) -> bool:
        return all(w is not None for w in self.winner)

    @property
    def seed_sets(self) -> tuple[tuple[int, ...], ...]:
        """S_i as seed positions in the auction order"""
        return tuple(
            tuple(j for j, w in enumerate(self.winner) if w == i)
            for i in range(self.competitors)
        )

    @property
    def allocation(self) -> Allocation:
        return Allocation(owners=self.winner, competitors=self.competitors)
