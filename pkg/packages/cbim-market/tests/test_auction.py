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

import unittest

import numpy as np
import pytest
from pydantic import ValidationError

from cbim_market.auction import initial_prices, run_auction
from cbim_market.errors import AuctionError
from cbim_market.models import AuctionState
from cbim_network.models.graph import SeedSet


def _state(prices, budgets, round_index: int = 0) -> AuctionState:
    return AuctionState(
        prices=np.asarray(prices, dtype=np.float64),
        budgets=np.asarray(budgets, dtype=np.float64),
        order=SeedSet(seeds=tuple(range(len(prices)))),
        round_index=round_index,
    )


class TestInitialPrices(unittest.TestCase):
    def test_equal_budgets_five_seeds(self):
        np.testing.assert_allclose(initial_prices([3, 3], 5), [1.2] * 5, atol=1e-12)

    def test_fig_budgets_three_seeds(self):
        np.testing.assert_allclose(initial_prices([5, 5], 3), [10 / 3] * 3, atol=1e-12)

    def test_single_bidder_single_seed(self):
        assert initial_prices([2.5], 1).tolist() == [2.5]

    def test_zero_seeds_rejected(self):
        with pytest.raises(AuctionError):
            initial_prices([3, 3], 0)

    def test_empty_budgets_rejected(self):
        with pytest.raises(AuctionError):
            initial_prices([], 2)


class TestRunAuction(unittest.TestCase):
    def test_illustrative_round_replay(self):
        state = _state([1, 1, 1], [3, 3])
        bids = np.array([[2.0, 0.0, 1.0], [1.5, 0.0, 2.0]])
        outcome = run_auction(state, bids)
        assert outcome.winner == (0, None, 1)
        assert outcome.seed_sets == ((0,), (2,))
        assert not outcome.all_sold
        np.testing.assert_allclose(outcome.payment, [1.5, 0.0, 1.0])
        np.testing.assert_allclose(outcome.costs, [1.5, 1.0])
        np.testing.assert_allclose(outcome.remaining, [1.5, 2.0])
        # c1's 1.0 on the third seed is not above the starting price
        assert outcome.effective.tolist() == [[True, False, False], [True, False, True]]
        np.testing.assert_allclose(outcome.effective_prices, [[2.0, 0, 0], [1.5, 0, 2.0]])
        assert outcome.allocation.owners == (0, None, 1)

    def test_all_zero_bids(self):
        outcome = run_auction(_state([1, 1], [3, 3]), np.zeros((2, 2)))
        assert outcome.winner == (None, None)
        assert not outcome.all_sold
        assert outcome.costs.tolist() == [0.0, 0.0]

    def test_lone_bidder_pays_starting_price(self):
        prices = [1.0, 0.5, 2.0]
        bids = np.array([[p + 0.01 for p in prices], [0.0, 0.0, 0.0]])
        outcome = run_auction(_state(prices, [10, 10]), bids)
        assert outcome.all_sold
        np.testing.assert_allclose(outcome.payment, prices)
        np.testing.assert_allclose(outcome.costs, [3.5, 0.0])

    def test_equal_bids_go_to_lowest_index(self):
        outcome = run_auction(_state([1.0], [3, 3, 3]), np.array([[1.0], [2.0], [2.0]]))
        assert outcome.winner == (1,)
        assert outcome.payment.tolist() == [2.0]

    def test_bid_above_remaining_budget_is_noneffective(self):
        state = _state([1.0, 1.0], [3, 3])
        bids = np.array([[2.5, 2.0], [1.2, 1.1]])
        outcome = run_auction(state, bids)
        # competitor 0 pays 1.2 for the first seed, leaving 1.8 < 2.0
        assert outcome.winner == (0, 1)
        assert not outcome.effective[0, 1]
        np.testing.assert_allclose(outcome.payment, [1.2, 1.0])

    def test_bid_equal_to_remaining_is_effective(self):
        outcome = run_auction(_state([1.0, 1.0], [2.5, 3]), np.array([[1.5, 1.5], [0.0, 0.0]]))
        assert outcome.winner == (0, 0)
        np.testing.assert_allclose(outcome.remaining, [0.5, 3.0])

    def test_bid_equal_to_price_is_noneffective(self):
        outcome = run_auction(_state([1.0], [3, 3]), np.array([[1.0], [0.5]]))
        assert outcome.winner == (None,)

    def test_bid_shape_checked(self):
        with pytest.raises(AuctionError):
            run_auction(_state([1, 1], [3, 3]), np.zeros((2, 3)))

    def test_identical_inputs_identical_outcomes(self):
        rng = np.random.default_rng(2)
        state = _state([1.0, 0.8, 1.3, 0.9], [3, 3, 2])
        bids = rng.uniform(0, 3, (3, 4))
        first, second = run_auction(state, bids), run_auction(state, bids)
        assert first.winner == second.winner
        np.testing.assert_array_equal(first.payment, second.payment)


def test_random_auctions_keep_invariants():
    rng = np.random.default_rng(17)
    for _ in range(2000):
        k, l = int(rng.integers(2, 5)), int(rng.integers(1, 6))
        prices = rng.uniform(0.2, 2.0, l)
        budgets = rng.uniform(0.5, 5.0, k)
        bids = rng.uniform(0, budgets[:, None], (k, l))
        outcome = run_auction(_state(prices, budgets), bids)
        assert np.all(outcome.costs <= budgets + 1e-12)
        assert np.all(outcome.remaining >= -1e-12)
        assert np.array_equal(outcome.effective_prices > 0, outcome.effective)
        for j, w in enumerate(outcome.winner):
            if w is None:
                assert outcome.payment[j] == 0.0
            else:
                assert prices[j] <= outcome.payment[j] <= bids[w, j]
        owned = [j for s in outcome.seed_sets for j in s]
        assert len(owned) == len(set(owned))


def test_state_rejects_non_positive_prices():
    with pytest.raises(ValidationError):
        _state([1.0, 0.0], [3, 3])


def test_state_rejects_non_positive_budgets():
    with pytest.raises(ValidationError):
        _state([1.0], [3, -1])
