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


class OracleError(ValueError):
    """Raised when an oracle is asked to go beyond its size caps"""

    GRAPH_TOO_LARGE = "Fixed-point oracle handles at most {} nodes, got {}"
    GRID_TOO_LARGE = "Auction enumeration would visit {} bid matrices, above the cap of {}"
    BAD_STEP = "Finite-difference step h must be > 0, got {}"
    EMPTY_GRID = "Bid grid must not be empty"
