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

class GraphError(ValueError):
    """Raised when a graph operation receives invalid arguments"""

    EMPTY_GRAPH = "Graph has no edges after dropping self-loops"
    SEED_COUNT = "Seed count must be in [1, {}], got {}"
    THRESHOLD_SHAPE = "Threshold draw has {} values for a graph of {} nodes"
    ALLOCATION_SHAPE = "Allocation covers {} seeds but the seed set has {}"
    COMPETITOR_INDEX = "Competitor index {} is outside [0, {})"
    STEP_LIMIT = "Diffusion step limit t_up must be >= 1, got {}"
    UNKNOWN_NODE = "Node id {} is outside [0, {})"
    DUPLICATE_SEED = "Seed set contains duplicate node {}"
