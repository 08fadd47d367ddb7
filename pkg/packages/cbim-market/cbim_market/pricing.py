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
Starting-price adjustment between bidding rounds.

Unsold seeds get cheaper by a factor (1 - kappa). Sold seeds whose standalone
spread is below the round's per-seed average keep their price; sold seeds above
average get dearer by their contribution degree, capped at (1 + kappa).
"""

from collections.abc import Sequence

import numpy as np

from cbim_market.errors import AuctionError


def contribution_degrees(per_seed_spread: Sequence[int] | np.ndarray, l: int) -> np.ndarray:
    """CD_j = spread_j / (sum(spread) / l); the degrees average to 1"""
    spreads = np.asarray(per_seed_spread, dtype=np.float64)
    if spreads.size != l:
        raise AuctionError(AuctionError.LENGTH_MISMATCH.format("Per-seed spreads", spreads.size, l))
    if l <= 0:
        raise AuctionError(AuctionError.NO_SEEDS.format(l))
    if np.any(spreads <= 0):
        raise AuctionError(AuctionError.NON_POSITIVE.format("Per-seed spreads", spreads.tolist()))
    return spreads * l / spreads.sum()


def adjust_prices(
    prices: Sequence[float] | np.ndarray,
    sold: Sequence[bool] | np.ndarray,
    cd: Sequence[float] | np.ndarray,
    kappa: float,
) -> np.ndarray:
    """Next round's starting prices"""
    if not 0.0 < kappa < 1.0:
        raise AuctionError(AuctionError.KAPPA_RANGE.format(kappa))
    prices = np.asarray(prices, dtype=np.float64)
    sold = np.asarray(sold, dtype=bool)
    cd = np.asarray(cd, dtype=np.float64)
    for name, vector in (("Sold flags", sold), ("Contribution degrees", cd)):
        if vector.size != prices.size:
            raise AuctionError(AuctionError.LENGTH_MISMATCH.format(name, vector.size, prices.size))

    raised = prices * np.minimum(1.0 + kappa, cd)
    return np.where(~sold, prices * (1.0 - kappa), np.where(cd < 1.0, prices, raised))
