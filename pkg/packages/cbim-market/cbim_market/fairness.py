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
Generalized-entropy fairness index over competitors' unit costs.

A competitor's unit cost R_i is its influence spread per unit of currency
spent (0 for a competitor that spent nothing). With mean unit cost R,

    GE = 1 / (k * omega * (omega - 1)) * sum((R_i / R) ** omega - 1)

GE is 0 when every competitor gets the same return on its spending and grows as
returns diverge. A round in which nobody spent anything has GE 0.
"""

from collections.abc import Sequence

import numpy as np

from cbim_market.errors import AuctionError

MIN_COMPETITORS = 2


def unit_costs(
    rewards: Sequence[float] | np.ndarray, costs: Sequence[float] | np.ndarray
) -> np.ndarray:
    rewards = np.asarray(rewards, dtype=np.float64)
    costs = np.asarray(costs, dtype=np.float64)
    if rewards.shape != costs.shape:
        raise AuctionError(AuctionError.LENGTH_MISMATCH.format("Costs", costs.size, rewards.size))
    spent = costs > 0
    return np.divide(rewards, costs, out=np.zeros_like(rewards), where=spent)


def fairness_index(
    rewards: Sequence[float] | np.ndarray,
    costs: Sequence[float] | np.ndarray,
    omega: float,
) -> float:
    if omega in (0.0, 1.0):
        raise AuctionError(AuctionError.OMEGA_VALUE.format(omega))
    ratios = unit_costs(rewards, costs)
    k = ratios.size
    if k < MIN_COMPETITORS:
        raise AuctionError(AuctionError.TOO_FEW_COMPETITORS.format(k))
    mean = ratios.mean()
    if mean == 0.0:
        return 0.0
    terms = (ratios / mean) ** omega - 1.0
    return float(terms.sum() / (k * omega * (omega - 1.0)))
