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
Multi-agent actor-critic learner.

Each agent owns an actor that sees only its own observation and a critic that,
in the centralized variant, sees the joint observation and joint action of all
agents (independent learners see only their own slice). Transitions go into one
shared replay buffer as fractions of each agent's budget; every `update_every` insertions, once the buffer holds at
least one batch, every agent takes one critic step and one actor step on a
shared minibatch, then all target networks move toward their online copies.
"""

import copy
import logging
from collections.abc import Sequence

import numpy as np
import torch
from pydantic import BaseModel, ConfigDict, Field

from cbim_marl.learning import (
    act,
    actor_update,
    assert_finite,
    critic_update,
    soft_update,
)
from cbim_marl.models import JointLayout, Observation, Transition
from cbim_marl.networks import (
    DEFAULT_HIDDEN,
    Actor,
    Critic,
    get_flat,
    init_uniform,
    set_flat,
    torch_generator,
)
from cbim_marl.replay import ReplayBuffer
from cbim_network.rng import RngLabel, stream

logger = logging.getLogger(__name__)

INIT_STREAM = "init"
REPLAY_STREAM = "replay"


class LearnerSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    hidden: int = Field(DEFAULT_HIDDEN, ge=1)
    gamma: float = Field(0.95, ge=0.0, le=1.0)
    tau: float = Field(0.01, gt=0.0, le=1.0)
    learning_rate: float = Field(0.01, gt=0.0)
    actor_learning_rate: float = Field(0.001, gt=0.0)
    actor_regularization: float = Field(0.001, ge=0.0)
    buffer_capacity: int = Field(10**6, ge=1)
    batch_size: int = Field(1024, ge=1)
    update_every: int = Field(40, ge=1)
    centralized: bool = True


class BiddingAgent:
    """Online and target networks of one competitor, plus their optimizers"""

    def __init__(
        self,
        index: int,
        layout: JointLayout,
        budget: float,
        settings: LearnerSettings,
        master_seed: int,
    ):
        self.index = index
        self.budget = float(budget)
        self.actor = Actor(layout.obs_dim, layout.seeds, settings.hidden)
        self.critic = Critic(*layout.critic_dims(centralized=settings.centralized), settings.hidden)
        init_uniform(self.actor, torch_generator(stream(master_seed, INIT_STREAM, index, 0)))
        init_uniform(self.critic, torch_generator(stream(master_seed, INIT_STREAM, index, 1)))
        self.target_actor = copy.deepcopy(self.actor)
        self.target_critic = copy.deepcopy(self.critic)
        self.actor_optimizer = torch.optim.Adam(self.actor.parameters(), lr=settings.actor_learning_rate)
        self.critic_optimizer = torch.optim.Adam(self.critic.parameters(), lr=settings.learning_rate)

    def act(self, obs: Observation, noise_std: float, rng_label: RngLabel) -> np.ndarray:
        return act(self.actor, obs, self.budget, noise_std, rng_label, agent=self.index)

    def networks(self) -> dict[str, torch.nn.Module]:
        return {
            "actor": self.actor,
            "critic": self.critic,
            "target_actor": self.target_actor,
            "target_critic": self.target_critic,
        }

    def flat_parameters(self) -> dict[str, np.ndarray]:
        return {role: get_flat(net) for role, net in self.networks().items()}

    def load_flat_parameters(self, parameters: dict[str, np.ndarray]) -> None:
        for role, net in self.networks().items():
            set_flat(net, parameters[role])

    def check_finite(self) -> None:
        for role, net in self.networks().items():
            assert_finite(net, self.index, role)


class MultiAgentLearner:
    def __init__(
        self,
        layout: JointLayout,
        budgets: Sequence[float],
        settings: LearnerSettings,
        master_seed: int,
    ):
        self.layout = layout
        self.budgets = [float(b) for b in budgets]
        self.settings = settings
        self.agents = [
            BiddingAgent(i, layout, b, settings, master_seed) for i, b in enumerate(self.budgets)
        ]
        self.buffer = ReplayBuffer(layout, settings.buffer_capacity)
        self.updates = 0

    def act(
        self, observations: Sequence[Observation], noise_std: float, rng_label: RngLabel
    ) -> np.ndarray:
        return np.stack(
            [agent.act(obs, noise_std, rng_label) for agent, obs in zip(self.agents, observations, strict=True)]
        )

    def observe(self, transition: Transition, rng_label: RngLabel) -> bool:
        """Store a transition, in budget fractions, and run an update when the cadence says so"""
        self.buffer.add(transition.in_budget_units(self.layout, self.budgets))
        due = self.buffer.total_added % self.settings.update_every == 0
        if due and len(self.buffer) >= self.settings.batch_size:
            self.update(rng_label)
            return True
        return False

    def update(self, rng_label: RngLabel) -> None:
        settings = self.settings
        batch = self.buffer.sample(settings.batch_size, rng_label.generator(REPLAY_STREAM))
        target_actors = [agent.target_actor for agent in self.agents]
        for agent in self.agents:
            loss = critic_update(
                agent.index,
                batch,
                agent.critic,
                agent.critic_optimizer,
                target_actors,
                agent.target_critic,
                self.layout,
                settings.gamma,
                centralized=settings.centralized,
            )
            objective = actor_update(
                agent.index,
                batch,
                agent.actor,
                agent.actor_optimizer,
                agent.critic,
                self.layout,
                centralized=settings.centralized,
                regularization=settings.actor_regularization,
            )
            logger.debug(
                "Update %d agent %d: critic loss %.6g, actor objective %.6g",
                self.updates,
                agent.index,
                loss,
                objective,
            )
        for agent in self.agents:
            soft_update(agent.actor, agent.target_actor, settings.tau)
            soft_update(agent.critic, agent.target_critic, settings.tau)
            agent.check_finite()
        self.updates += 1
