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

from collections.abc import Sequence

import numpy as np
import torch
from pydantic import BaseModel, ConfigDict, Field

from cbim_marl.errors import LearningError


class JointLayout(BaseModel):
    """Positions of each agent's slice inside joint observation and action vectors"""

    model_config = ConfigDict(frozen=True)

    competitors: int = Field(..., ge=1)
    seeds: int = Field(..., ge=1)

    @property
    def obs_dim(self) -> int:
        return self.seeds + 1

    @property
    def joint_obs_dim(self) -> int:
        return self.competitors * self.obs_dim

    @property
    def joint_action_dim(self) -> int:
        return self.competitors * self.seeds

    def obs_slice(self, agent: int) -> slice:
        self.check_agent(agent)
        return slice(agent * self.obs_dim, (agent + 1) * self.obs_dim)

    def action_slice(self, agent: int) -> slice:
        self.check_agent(agent)
        return slice(agent * self.seeds, (agent + 1) * self.seeds)

    def check_agent(self, agent: int) -> None:
        if not 0 <= agent < self.competitors:
            raise LearningError(LearningError.AGENT_INDEX.format(agent, self.competitors))

    def critic_dims(self, *, centralized: bool) -> tuple[int, int]:
        """(observation, action) input sizes of a critic"""
        if centralized:
            return self.joint_obs_dim, self.joint_action_dim
        return self.obs_dim, self.seeds

    def budget_scales(self, budgets: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        """Per-column budgets of a joint observation and of a joint action"""
        values = np.asarray(budgets, dtype=np.float64)
        if values.shape != (self.competitors,):
            raise LearningError(LearningError.SHAPE_MISMATCH.format("Budgets", values.shape, (self.competitors,)))
        if np.any(values <= 0):
            raise LearningError(LearningError.BAD_RANGE.format("budgets", "(0, inf)", values.tolist()))
        return np.repeat(values, self.obs_dim), np.repeat(values, self.seeds)

    def critic_view(
        self,
        agent: int,
        joint_obs: torch.Tensor,
        joint_action: torch.Tensor,
        *,
        centralized: bool,
    ) -> tuple[torch.Tensor, torch.Tensor]:
        """What agent's critic sees: everything, or only its own slices"""
        if centralized:
            return joint_obs, joint_action
        return joint_obs[..., self.obs_slice(agent)], joint_action[..., self.action_slice(agent)]


class Observation(BaseModel):
    """o_i: last round's effective bidding prices and leftover budget"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    g_prev: np.ndarray
    rb_prev: float

    @classmethod
    def initial(cls, seeds: int, budget: float) -> "Observation":
        return cls(g_prev=np.zeros(seeds), rb_prev=float(budget))

    def as_array(self) -> np.ndarray:
        return np.append(np.asarray(self.g_prev, dtype=np.float64), self.rb_prev)


def joint_observation(observations: list[Observation]) -> np.ndarray:
    return np.concatenate([o.as_array() for o in observations])


class Transition(BaseModel):
    """One replay record: the joint step of all agents"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    joint_obs: np.ndarray
    joint_action: np.ndarray
    rewards: np.ndarray
    joint_next_obs: np.ndarray
    terminal: bool

    def check_layout(self, layout: JointLayout) -> None:
        expected = {
            "joint_obs": (layout.joint_obs_dim,),
            "joint_action": (layout.joint_action_dim,),
            "rewards": (layout.competitors,),
            "joint_next_obs": (layout.joint_obs_dim,),
        }
        for name, shape in expected.items():
            actual = np.shape(getattr(self, name))
            if actual != shape:
                raise LearningError(LearningError.SHAPE_MISMATCH.format(name, actual, shape))

    def in_budget_units(self, layout: JointLayout, budgets: Sequence[float]) -> "Transition":
        """Observations and bids divided by the budget of the agent they belong to"""
        self.check_layout(layout)
        obs_scale, action_scale = layout.budget_scales(budgets)
        return self.model_copy(
            update={
                "joint_obs": np.asarray(self.joint_obs, dtype=np.float64) / obs_scale,
                "joint_action": np.asarray(self.joint_action, dtype=np.float64) / action_scale,
                "joint_next_obs": np.asarray(self.joint_next_obs, dtype=np.float64) / obs_scale,
            }
        )


class TransitionBatch(BaseModel):
    """A sampled minibatch as float64 tensors"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    joint_obs: torch.Tensor
    joint_action: torch.Tensor
    rewards: torch.Tensor
    joint_next_obs: torch.Tensor
    terminal: torch.Tensor

    @property
    def size(self) -> int:
        return int(self.rewards.shape[0])

    @classmethod
    def from_transitions(cls, transitions: list[Transition]) -> "TransitionBatch":
        if not transitions:
            raise LearningError(LearningError.EMPTY_BATCH)

        def stack(name: str) -> torch.Tensor:
            return torch.as_tensor(
                np.stack([np.asarray(getattr(t, name), dtype=np.float64) for t in transitions]),
                dtype=torch.float64,
            )

        return cls(
            joint_obs=stack("joint_obs"),
            joint_action=stack("joint_action"),
            rewards=stack("rewards"),
            joint_next_obs=stack("joint_next_obs"),
            terminal=torch.as_tensor([float(t.terminal) for t in transitions], dtype=torch.float64),
        )
