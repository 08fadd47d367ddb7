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


class LearningError(ValueError):
    """Raised when learning components receive mismatched inputs"""

    SHAPE_MISMATCH = "{} has shape {}, expected {}"
    EMPTY_BATCH = "Cannot update from an empty batch"
    BAD_RANGE = "{} must be in {}, got {}"
    AGENT_INDEX = "Agent index {} is outside [0, {})"


class NumericFailureError(ArithmeticError):
    """Raised when a network parameter becomes NaN or infinite"""

    NON_FINITE = "Agent {} {} parameter {!r} is not finite"

    def __init__(self, agent: int, role: str, parameter: str):
        super().__init__(self.NON_FINITE.format(agent, role, parameter))
        self.agent = agent
        self.role = role
        self.parameter = parameter


class CheckpointError(Exception):
    """Raised when a checkpoint file cannot be decoded or does not fit the experiment"""

    BAD_MAGIC = "Not a checkpoint file: bad header {!r}"
    BAD_VERSION = "Unsupported checkpoint version {} (expected {})"
    TRUNCATED = "Checkpoint is truncated: expected {} bytes of parameters, found {}"
    TRAILING = "Checkpoint has {} unexpected trailing bytes"
    LAYOUT = "Checkpoint layout {} does not match the experiment layout {}"
    BUDGETS = "Checkpoint budgets {} do not match the configured budgets {}"
