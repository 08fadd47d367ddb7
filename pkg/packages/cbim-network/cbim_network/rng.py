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
Labeled random streams.

Every random draw in an experiment comes from a stream derived from the master
seed plus a label: a purpose string and a tuple of integer indices
(iteration, round, agent, ...). Streams with different labels are independent,
and the same label always reproduces the same stream, so the order in which
streams are consumed (or whether they run in parallel) never changes results.

Usage:

```python
from cbim_network.rng import RngLabel

label = RngLabel(master_seed=7, iteration=0, round_index=3)
rng = label.generator("thresholds")
rng.random(10)
```
"""

import zlib

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


def purpose_key(purpose: str) -> int:
    """Stable 32-bit key for a purpose string (independent of PYTHONHASHSEED)."""
    return zlib.crc32(purpose.encode("utf-8"))


def stream(master_seed: int, purpose: str, *indices: int) -> np.random.Generator:
    """Return the generator for (master_seed, purpose, *indices)."""
    sequence = np.random.SeedSequence(
        entropy=master_seed,
        spawn_key=(purpose_key(purpose), *(int(i) for i in indices)),
    )
    return np.random.default_rng(sequence)


class RngLabel(BaseModel):
    """The (master seed, iteration, round) triple identifying one bidding round."""

    model_config = ConfigDict(frozen=True)

    master_seed: int = Field(..., ge=0)
    iteration: int = Field(0, ge=0)
    round_index: int = Field(0, ge=0)

    def generator(self, purpose: str, *extra: int) -> np.random.Generator:
        return stream(
            self.master_seed, purpose, self.iteration, self.round_index, *extra
        )

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.master_seed, self.iteration, self.round_index)
