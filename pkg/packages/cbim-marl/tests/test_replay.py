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

from cbim_marl.errors import LearningError
from cbim_marl.models import JointLayout, Transition
from cbim_marl.replay import ReplayBuffer

LAYOUT = JointLayout(competitors=2, seeds=2)


def _transition(tag: float, *, terminal: bool = False) -> Transition:
    return Transition(
        joint_obs=np.full(LAYOUT.joint_obs_dim, tag),
        joint_action=np.full(LAYOUT.joint_action_dim, tag),
        rewards=np.array([tag, -tag]),
        joint_next_obs=np.full(LAYOUT.joint_obs_dim, tag + 0.5),
        terminal=terminal,
    )


def test_size_tracks_insertions():
    buffer = ReplayBuffer(LAYOUT, 10)
    for i in range(4):
        buffer.add(_transition(i))
    assert len(buffer) == 4
    assert buffer.get(0).rewards.tolist() == [0.0, -0.0]


def test_oldest_records_evicted_first():
    capacity, extra = 5, 3
    buffer = ReplayBuffer(LAYOUT, capacity)
    for i in range(capacity + extra):
        buffer.add(_transition(i, terminal=i % 2 == 0))
    assert len(buffer) == capacity
    held = [buffer.get(p).joint_obs[0] for p in range(capacity)]
    assert held == [float(i) for i in range(extra, capacity + extra)]
    assert buffer.get(0).terminal is False
    assert buffer.total_added == capacity + extra


def test_growth_past_initial_rows():
    buffer = ReplayBuffer(LAYOUT, 5000)
    for i in range(3000):
        buffer.add(_transition(i))
    assert len(buffer) == 3000
    assert buffer.get(2999).joint_obs[0] == 2999.0
    assert buffer.get(1500).joint_next_obs[0] == 1500.5


def test_sampling_reproducible():
    buffer = ReplayBuffer(LAYOUT, 50)
    for i in range(30):
        buffer.add(_transition(i))
    first = buffer.sample(8, np.random.default_rng(1))
    second = buffer.sample(8, np.random.default_rng(1))
    assert first.size == 8
    assert first.joint_obs.equal(second.joint_obs)
    assert first.rewards.shape == (8, 2)


def test_shape_checked_on_insert():
    buffer = ReplayBuffer(LAYOUT, 5)
    bad = Transition(
        joint_obs=np.zeros(5),
        joint_action=np.zeros(4),
        rewards=np.zeros(2),
        joint_next_obs=np.zeros(6),
        terminal=False,
    )
    with pytest.raises(LearningError, match="joint_obs"):
        buffer.add(bad)


def test_empty_buffer_cannot_sample():
    with pytest.raises(LearningError):
        ReplayBuffer(LAYOUT, 5).sample(2, np.random.default_rng(0))


def test_get_out_of_range():
    buffer = ReplayBuffer(LAYOUT, 5)
    buffer.add(_transition(1))
    with pytest.raises(IndexError):
        buffer.get(1)
