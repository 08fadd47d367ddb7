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


class AuctionError(ValueError):
    """Raised when the bidding environment receives invalid arguments"""

    NO_SEEDS = "Seed count l must be positive, got {}"
    NO_BUDGETS = "At least one competitor budget is required"
    NON_POSITIVE = "{} must all be > 0, got {}"
    BID_SHAPE = "Bid matrix must have shape ({}, {}), got {}"
    LENGTH_MISMATCH = "{} has length {}, expected {}"
    KAPPA_RANGE = "Adjustment rate kappa must be in (0, 1), got {}"
    OMEGA_VALUE = "Fairness parameter omega must not be 0 or 1, got {}"
    TOO_FEW_COMPETITORS = "The fairness index needs at least two competitors, got {}"
