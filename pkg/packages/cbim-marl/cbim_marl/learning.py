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
Single learning steps for bidding agents.

Critic i regresses onto y = r_i + gamma * Q'_i(o', a') with a' taken from the
TARGET actors and no bootstrap on terminal records. Actor i ascends the mean of
Q_i(o, a) where its own action slot is replaced by its online actor's
noiseless bid and every other slot keeps the stored joint action.

Networks never see currency. Observations and bids enter them as fractions of
the owning agent's budget (see `Transition.in_budget_units`); only `act`
converts back, scaling the actor's output by the budget.
"""

import logging
from collections.abc import Sequence

import numpy as np
import torch
from torch import nn

from cbim_marl.errors import LearningError, NumericFailureError
from cbim_marl.models import JointLayout, Observation, TransitionBatch
from cbim_marl.networks import DTYPE, Actor, Critic
from cbim_network.rng import RngLabel

logger = logging.getLogger(__name__)

EXPLORATION_STREAM = "exploration"


def act(
    actor: Actor,
    obs: Observation,
    budget: float,
    noise_std: float,
    rng_label: RngLabel,
    agent: int = 0,
) -> np.ndarray:
    """Bids for one agent: actor output times budget, plus clipped Gaussian noise.

    `noise_std` is a fraction of the budget. With noise_std = 0 no random
    numbers are drawn and the result is exactly the scaled actor output.
    """
    if noise_std < 0:
        raise LearningError(LearningError.BAD_RANGE.format("noise_std", "[0, inf)", noise_std))
    if budget <= 0:
        raise LearningError(LearningError.BAD_RANGE.format("budget", "(0, inf)", budget))
    x = torch.as_tensor(obs.as_array() / budget, dtype=DTYPE)
    if x.shape != (actor.obs_dim,):
        raise LearningError(LearningError.SHAPE_MISMATCH.format("Observation", tuple(x.shape), (actor.obs_dim,)))
    with torch.no_grad():
        raw = actor(x).numpy()
    bids = raw * budget
    if noise_std > 0:
        noise = rng_label.generator(EXPLORATION_STREAM, agent).normal(0.0, noise_std * budget, raw.size)
        bids = bids + noise
    return np.clip(bids, 0.0, budget)


def critic_eval(critic: Critic, joint_obs: np.ndarray | torch.Tensor, joint_action: np.ndarray | torch.Tensor) -> float:
    obs = torch.as_tensor(joint_obs, dtype=DTYPE)
    action = torch.as_tensor(joint_action, dtype=DTYPE)
    if obs.shape[-1:] != (critic.obs_dim,):
        raise LearningError(LearningError.SHAPE_MISMATCH.format("Critic observation", tuple(obs.shape), (critic.obs_dim,)))
    if action.shape[-1:] != (critic.action_dim,):
        raise LearningError(LearningError.SHAPE_MISMATCH.format("Critic action", tuple(action.shape), (critic.action_dim,)))
    with torch.no_grad():
        return float(critic(obs, action))


def policy_actions(actors: Sequence[Actor], joint_obs: torch.Tensor, layout: JointLayout) -> torch.Tensor:
    """Noiseless joint action of all actors, in budget fractions"""
    return torch.cat([actor(joint_obs[..., layout.obs_slice(j)]) for j, actor in enumerate(actors)], dim=-1)


def critic_targets(
    agent: int,
    batch: TransitionBatch,
    target_actors: Sequence[Actor],
    target_critic: Critic,
    layout: JointLayout,
    gamma: float,
    *,
    centralized: bool = True,
) -> torch.Tensor:
    with torch.no_grad():
        next_action = policy_actions(target_actors, batch.joint_next_obs, layout)
        obs, action = layout.critic_view(agent, batch.joint_next_obs, next_action, centralized=centralized)
        bootstrap = target_critic(obs, action)
        return batch.rewards[:, agent] + gamma * (1.0 - batch.terminal) * bootstrap


def critic_loss(
    agent: int,
    critic: Critic,
    batch: TransitionBatch,
    targets: torch.Tensor,
    layout: JointLayout,
    *,
    centralized: bool = True,
) -> torch.Tensor:
    obs, action = layout.critic_view(agent, batch.joint_obs, batch.joint_action, centralized=centralized)
    return torch.mean((critic(obs, action) - targets) ** 2)


def critic_update(
    agent: int,
    batch: TransitionBatch,
    critic: Critic,
    optimizer: torch.optim.Optimizer,
    target_actors: Sequence[Actor],
    target_critic: Critic,
    layout: JointLayout,
    gamma: float,
    *,
    centralized: bool = True,
) -> float:
    """One gradient step on the critic's squared TD error; returns the pre-step loss"""
    if batch.size == 0:
        raise LearningError(LearningError.EMPTY_BATCH)
    if not 0.0 <= gamma <= 1.0:
        raise LearningError(LearningError.BAD_RANGE.format("gamma", "[0, 1]", gamma))
    targets = critic_targets(agent, batch, target_actors, target_critic, layout, gamma, centralized=centralized)
    optimizer.zero_grad()
    loss = critic_loss(agent, critic, batch, targets, layout, centralized=centralized)
    loss.backward()
    optimizer.step()
    return float(loss.detach())


def actor_objective(
    agent: int,
    actor: Actor,
    critic: Critic,
    batch: TransitionBatch,
    layout: JointLayout,
    *,
    centralized: bool = True,
) -> torch.Tensor:
    """Mean Q with agent's stored action replaced by its current noiseless bid"""
    own = actor(batch.joint_obs[:, layout.obs_slice(agent)])
    columns = layout.action_slice(agent)
    joint_action = torch.cat(
        [batch.joint_action[:, : columns.start], own, batch.joint_action[:, columns.stop :]],
        dim=-1,
    )
    obs, action = layout.critic_view(agent, batch.joint_obs, joint_action, centralized=centralized)
    return critic(obs, action).mean()


def logit_penalty(agent: int, actor: Actor, batch: TransitionBatch, layout: JointLayout) -> torch.Tensor:
    """Mean squared pre-squash output of an actor over a batch"""
    return actor.logits(batch.joint_obs[:, layout.obs_slice(agent)]).pow(2).mean()


def actor_update(
    agent: int,
    batch: TransitionBatch,
    actor: Actor,
    optimizer: torch.optim.Optimizer,
    critic: Critic,
    layout: JointLayout,
    *,
    centralized: bool = True,
    regularization: float = 0.0,
) -> float:
    """One gradient-ascent step on the actor objective; returns the pre-step value.

    A positive `regularization` subtracts that multiple of the logit penalty,
    which keeps the logistic output away from its flat tails.
    """
    if batch.size == 0:
        raise LearningError(LearningError.EMPTY_BATCH)
    if regularization < 0:
        raise LearningError(LearningError.BAD_RANGE.format("regularization", "[0, inf)", regularization))
    optimizer.zero_grad()
    objective = actor_objective(agent, actor, critic, batch, layout, centralized=centralized)
    loss = -objective
    if regularization > 0:
        loss = loss + regularization * logit_penalty(agent, actor, batch, layout)
    loss.backward()
    optimizer.step()
    # the critic's gradients from this pass are not meant for the critic
    critic.zero_grad(set_to_none=True)
    return float(objective.detach())


def soft_update(online: nn.Module, target: nn.Module, tau: float) -> None:
    """target <- tau * online + (1 - tau) * target, in place"""
    if not 0.0 < tau <= 1.0:
        raise LearningError(LearningError.BAD_RANGE.format("tau", "(0, 1]", tau))
    online_params = list(online.parameters())
    target_params = list(target.parameters())
    if [p.shape for p in online_params] != [p.shape for p in target_params]:
        raise LearningError(
            LearningError.SHAPE_MISMATCH.format(
                "Target parameters",
                [tuple(p.shape) for p in target_params],
                [tuple(p.shape) for p in online_params],
            )
        )
    with torch.no_grad():
        for source, dest in zip(online_params, target_params, strict=True):
            dest.lerp_(source, tau)


def assert_finite(module: nn.Module, agent: int, role: str) -> None:
    for name, parameter in module.named_parameters():
        if not torch.isfinite(parameter).all():
            logger.error("Non-finite %s parameter %s for agent %d", role, name, agent)
            raise NumericFailureError(agent, role, name)
