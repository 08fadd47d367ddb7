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
Sealed-bid second-price seed auctions.

Seeds are sold one at a time in the fixed auction order. A bid is effective
when it is strictly above the seed's starting price and does not exceed the
bidder's remaining budget at that point in the order. The highest effective bid
wins (ties go to the lowest competitor index) and pays the second-highest
effective bid, or the starting price when it was the only effective bid. Seeds
with no effective bid stay unsold.
"""

import logging
from collections.abc import Sequence

import numpy as np

from cbim_market.errors import AuctionError
from cbim_market.models import AuctionOutcome, AuctionState

logger = logging.getLogger(__name__)


def initial_prices(budgets: Sequence[float] | np.ndarray, l: int) -> np.ndarray:
    """Starting price of every seed when an environment is (re)initialized: sum(b)/l"""
    if l <= 0:
        raise AuctionError(AuctionError.NO_SEEDS.format(l))
    budgets = np.asarray(budgets, dtype=np.float64)
    if budgets.size == 0:
        raise AuctionError(AuctionError.NO_BUDGETS)
    if np.any(budgets <= 0):
        raise AuctionError(AuctionError.NON_POSITIVE.format("Budgets", budgets.tolist()))
    return np.full(l, budgets.sum() / l)


def _check_bids(state: AuctionState, bids: np.ndarray) -> np.ndarray:
    bids = np.asarray(bids, dtype=np.float64)
    expected = (state.competitors, state.seed_count)
    if bids.shape != expected:
        raise AuctionError(AuctionError.BID_SHAPE.format(*expected, bids.shape))
    if state.order.size != state.seed_count:
        raise AuctionError(
            AuctionError.LENGTH_MISMATCH.format("Seed order", state.order.size, state.seed_count)
        )
    return bids


def run_auction(state: AuctionState, bids: np.ndarray) -> AuctionOutcome:
    """Resolve one round of bidding for every seed in order.

    Args:
      state: Starting prices, budgets and the auction order
      bids: k x l matrix, bids[i, j] is competitor i's bid for the j-th seed

    Returns:
      The per-seed winners and payments plus per-competitor costs
    """
    bids = _check_bids(state, bids)
    k, l = bids.shape
    remaining = state.budgets.copy()
    effective = np.zeros((k, l), dtype=bool)
    payment = np.zeros(l)
    winner: list[int | None] = [None] * l

    for j in range(l):
        column = bids[:, j]
        mask = (column > state.prices[j]) & (column <= remaining)
        effective[:, j] = mask
        if not mask.any():
            continue
        contest = np.where(mask, column, -np.inf)
        # argmax keeps the first maximum, i.e. the lowest competitor index
        best = int(contest.argmax())
        contest[best] = -np.inf
        runner_up = contest.max()
        price = float(runner_up) if np.isfinite(runner_up) else float(state.prices[j])
        winner[j] = best
        payment[j] = price
        remaining[best] -= price

    effective_prices = np.where(effective, bids, 0.0)
    costs = np.zeros(k)
    for j, w in enumerate(winner):
        if w is not None:
            costs[w] += payment[j]
    logger.debug("Round %d winners %s payments %s", state.round_index, winner, payment)
    return AuctionOutcome(
        winner=tuple(winner),
        payment=payment,
        effective=effective,
        effective_prices=effective_prices,
        costs=costs,
        remaining=remaining,
    )
