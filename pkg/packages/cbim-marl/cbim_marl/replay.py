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
Fixed-capacity ring buffer of joint transitions.

Records are stored column-wise in float64 arrays that grow by doubling until
they reach capacity, so a large capacity costs nothing until it is used. Once
full, each new record overwrites the oldest one.
"""

import numpy as np
import torch

from cbim_marl.errors import LearningError
from cbim_marl.models import JointLayout, Transition, TransitionBatch

INITIAL_ROWS = 1024


class ReplayBuffer:
    def __init__(self, layout: JointLayout, capacity: int):
        if capacity < 1:
            raise LearningError(LearningError.BAD_RANGE.format("Replay capacity", "[1, inf)", capacity))
        self.layout = layout
        self.capacity = capacity
        self.cursor = 0
        self.size = 0
        self.total_added = 0
        rows = min(capacity, INITIAL_ROWS)
        self._obs = np.zeros((rows, layout.joint_obs_dim))
        self._action = np.zeros((rows, layout.joint_action_dim))
        self._rewards = np.zeros((rows, layout.competitors))
        self._next_obs = np.zeros((rows, layout.joint_obs_dim))
        self._terminal = np.zeros(rows, dtype=bool)

    def __len__(self) -> int:
        return self.size

    def _grow(self) -> None:
        rows = min(self.capacity, 2 * self._obs.shape[0])
        for name in ("_obs", "_action", "_rewards", "_next_obs", "_terminal"):
            old = getattr(self, name)
            new = np.zeros((rows, *old.shape[1:]), dtype=old.dtype)
            new[: old.shape[0]] = old
            setattr(self, name, new)

    def add(self, transition: Transition) -> None:
        transition.check_layout(self.layout)
        if self.cursor >= self._obs.shape[0]:
            self._grow()
        row = self.cursor
        self._obs[row] = transition.joint_obs
        self._action[row] = transition.joint_action
        self._rewards[row] = transition.rewards
        self._next_obs[row] = transition.joint_next_obs
        self._terminal[row] = transition.terminal
        self.cursor = (self.cursor + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)
        self.total_added += 1

    def get(self, position: int) -> Transition:
        """The position-th oldest record still held"""
        if not 0 <= position < self.size:
            raise IndexError(position)
        start = self.cursor if self.size == self.capacity else 0
        row = (start + position) % self.capacity
        return Transition(
            joint_obs=self._obs[row].copy(),
            joint_action=self._action[row].copy(),
            rewards=self._rewards[row].copy(),
            joint_next_obs=self._next_obs[row].copy(),
            terminal=bool(self._terminal[row]),
        )

    def sample(self, batch_size: int, rng: np.random.Generator) -> TransitionBatch:
        """Uniform draw of batch_size rows (with replacement)"""
        if self.size == 0 or batch_size < 1:
            raise LearningError(LearningError.EMPTY_BATCH)
        rows = rng.integers(0, self.size, batch_size)

        def take(array: np.ndarray) -> torch.Tensor:
            return torch.as_tensor(array[rows], dtype=torch.float64)

        return TransitionBatch(
            joint_obs=take(self._obs),
            joint_action=take(self._action),
            rewards=take(self._rewards),
            joint_next_obs=take(self._next_obs),
            terminal=take(self._terminal.astype(np.float64)),
        )
