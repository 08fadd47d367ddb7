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
from pydantic import BaseModel, ConfigDict

UNACTIVATED = -1


class Allocation(BaseModel):
    """Winner of each seed; None means the seed's bidding failed (blocked)"""

    model_config = ConfigDict(frozen=True)

    owners: tuple[int | None, ...]
    competitors: int

    def seed_positions(self, competitor: int) -> tuple[int, ...]:
        return tuple(j for j, owner in enumerate(self.owners) if owner == competitor)


class DiffusionResult(BaseModel):
    """Outcome of one competitive diffusion.

    `owner_of_node[v]` is the competitor that activated v, or UNACTIVATED.
    `per_seed_spread` is empty unless the diffusion was asked for standalone
    seed spreads.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    owner_of_node: np.ndarray
    competitors: int
    steps_used: int
    per_seed_spread: tuple[int, ...] = ()

    @property
    def activated_by(self) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(int(v) for v in np.flatnonzero(self.owner_of_node == i))
            for i in range(self.competitors)
        )

    def spreads(self) -> tuple[int, ...]:
        counts = np.bincount(
            self.owner_of_node[self.owner_of_node != UNACTIVATED],
            minlength=self.competitors,
        )
        return tuple(int(c) for c in counts[: self.competitors])
