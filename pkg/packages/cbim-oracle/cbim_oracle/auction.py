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
Exhaustive auction checks.

Every bid matrix on a small grid is run through `run_auction` and compared
with an independent resolver written over plain lists. Each outcome is also
checked for the payment sandwich, budget feasibility, disjoint seed sets and
invariance under raising noneffective bids that stay noneffective.
"""

import itertools
from collections.abc import Sequence

import numpy as np

from cbim_market.auction import run_auction
from cbim_market.models import AuctionOutcome, AuctionState
from cbim_network.models.graph import SeedSet
from cbim_oracle.errors import OracleError
from cbim_oracle.models import OracleReport

MAX_OUTCOMES = 10**6
DEFAULT_GRID = (0.0, 0.5, 1.1, 2.0)
TOLERANCE = 1e-12


def resolve_auction(
    prices: Sequence[float], budgets: Sequence[float], bids: Sequence[Sequence[float]]
) -> tuple[list[int | None], list[float]]:
    """Reference resolution: sort the qualifying bids of each seed"""
    left = list(budgets)
    winners: list[int | None] = []
    payments: list[float] = []
    for j, price in enumerate(prices):
        offers = sorted(
            ((bids[i][j], -i) for i in range(len(budgets)) if price < bids[i][j] <= left[i]),
            reverse=True,
        )
        if not offers:
            winners.append(None)
            payments.append(0.0)
            continue
        _, neg_index = offers[0]
        pay = offers[1][0] if len(offers) > 1 else price
        winners.append(-neg_index)
        payments.append(pay)
        left[-neg_index] -= pay
    return winners, payments


def _same_outcome(a: AuctionOutcome, b: AuctionOutcome) -> bool:
    return a.winner == b.winner and np.array_equal(a.payment, b.payment) and np.array_equal(a.costs, b.costs)


def _violations(state: AuctionState, bids: np.ndarray, outcome: AuctionOutcome) -> list[str]:
    found = []
    winners, payments = resolve_auction(state.prices.tolist(), state.budgets.tolist(), bids.tolist())
    if list(outcome.winner) != winners or outcome.payment.tolist() != payments:
        found.append(f"resolver disagrees: {outcome.winner}/{outcome.payment.tolist()} vs {winners}/{payments}")
    for j, w in enumerate(outcome.winner):
        if w is not None and not state.prices[j] <= outcome.payment[j] <= bids[w, j]:
            found.append(f"payment sandwich broken on seed {j}")
    if np.any(outcome.costs > state.budgets + TOLERANCE):
        found.append(f"costs {outcome.costs.tolist()} exceed budgets")
    owned = [j for seed_set in outcome.seed_sets for j in seed_set]
    if len(owned) != len(set(owned)):
        found.append("seed sets overlap")
    for i in range(state.competitors):
        paid = sum(outcome.payment[j] for j in outcome.seed_sets[i])
        if abs(paid - outcome.costs[i]) > TOLERANCE:
            found.append(f"cost of competitor {i} is not the sum of its payments")

    # raise each noneffective bid to a value that is still noneffective
    for i, j in zip(*np.nonzero(~outcome.effective), strict=True):
        raised = bids.copy()
        raised[i, j] = state.prices[j] if bids[i, j] <= state.prices[j] else bids[i, j] + 1.0
        if not _same_outcome(outcome, run_auction(state, raised)):
            found.append(f"raising noneffective bid ({i}, {j}) changed the outcome")
    return found


def enumerate_auction(
    prices: Sequence[float],
    budgets: Sequence[float],
    bid_grid: Sequence[float] = DEFAULT_GRID,
) -> OracleReport:
    k, l = len(budgets), len(prices)
    if not bid_grid:
        raise OracleError(OracleError.EMPTY_GRID)
    combinations = len(bid_grid) ** (k * l)
    if combinations > MAX_OUTCOMES:
        raise OracleError(OracleError.GRID_TOO_LARGE.format(combinations, MAX_OUTCOMES))

    state = AuctionState(
        prices=np.asarray(prices, dtype=np.float64),
        budgets=np.asarray(budgets, dtype=np.float64),
        order=SeedSet(seeds=tuple(range(l))),
    )
    report = OracleReport(suite=f"auction k={k} l={l}", trials=combinations)
    for trial, flat in enumerate(itertools.product(bid_grid, repeat=k * l)):
        bids = np.asarray(flat, dtype=np.float64).reshape(k, l)
        outcome = run_auction(state, bids)
        for detail in _violations(state, bids, outcome):
            report.record(
                trial,
                detail,
                prices=list(prices),
                budgets=list(budgets),
                bids=bids.tolist(),
            )
    return report
