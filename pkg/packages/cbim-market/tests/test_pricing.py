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
import pytest

from cbim_market.errors import AuctionError
from cbim_market.pricing import adjust_prices, contribution_degrees


def test_uniform_contribution():
    np.testing.assert_allclose(contribution_degrees([5, 5, 5], 3), [1, 1, 1])


def test_hand_evaluated_contribution():
    np.testing.assert_allclose(contribution_degrees([6, 3, 3], 3), [1.5, 0.75, 0.75])


def test_contribution_mean_is_one():
    rng = np.random.default_rng(4)
    for _ in range(100):
        spreads = rng.integers(1, 50, int(rng.integers(1, 10)))
        assert contribution_degrees(spreads, spreads.size).mean() == pytest.approx(1.0)


def test_contribution_length_checked():
    with pytest.raises(AuctionError):
        contribution_degrees([1, 2], 3)


def test_illustrative_adjustment():
    adjusted = adjust_prices([1, 1, 1], [1, 0, 1], [1.5, 0.3, 1.2], 0.1)
    np.testing.assert_allclose(adjusted, [1.1, 0.9, 1.1], atol=1e-12)


def test_sold_below_average_keeps_price():
    assert adjust_prices([2.0], [1], [0.5], 0.1).tolist() == [2.0]


def test_unsold_discount():
    np.testing.assert_allclose(adjust_prices([2.0], [0], [3.0], 0.3), [1.4])


def test_raise_capped_by_contribution():
    np.testing.assert_allclose(adjust_prices([2.0], [1], [1.05], 0.1), [2.1])


@pytest.mark.parametrize("kappa", [0.0, 1.0, -0.1, 1.5])
def test_kappa_range(kappa):
    with pytest.raises(AuctionError):
        adjust_prices([1.0], [1], [1.0], kappa)


def test_adjustment_bounds():
    rng = np.random.default_rng(6)
    for _ in range(500):
        l = int(rng.integers(1, 8))
        kappa = float(rng.uniform(0.01, 0.99))
        prices = rng.uniform(0.1, 5, l)
        sold = rng.random(l) < 0.5
        cd = contribution_degrees(rng.integers(1, 30, l), l)
        adjusted = adjust_prices(prices, sold, cd, kappa)
        assert np.all(adjusted > 0)
        assert np.all(adjusted >= prices * (1 - kappa) - 1e-12)
        assert np.all(adjusted <= prices * (1 + kappa) + 1e-12)
