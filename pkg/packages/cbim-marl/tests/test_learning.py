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

import unittest

import numpy as np
import pytest
import torch
from torch import nn

from cbim_marl.errors import LearningError, NumericFailureError
from cbim_marl.learning import (
    act,
    actor_update,
    assert_finite,
    critic_eval,
    critic_targets,
    critic_update,
    logit_penalty,
    soft_update,
)
from cbim_marl.models import JointLayout, Observation, TransitionBatch
from cbim_marl.networks import Actor, Critic, get_flat, init_uniform
from cbim_network.rng import RngLabel

LABEL = RngLabel(master_seed=3, iteration=1, round_index=2)


def _zero(module: nn.Module) -> nn.Module:
    with torch.no_grad():
        for p in module.parameters():
            p.zero_()
    return module


def _seeded(module: nn.Module, seed: int) -> nn.Module:
    generator = torch.Generator()
    generator.manual_seed(seed)
    init_uniform(module, generator)
    return module


def _batch(layout: JointLayout, size: int, *, reward: float = 1.0, terminal: bool = True, seed: int = 0) -> TransitionBatch:
    rng = np.random.default_rng(seed)
    return TransitionBatch(
        joint_obs=torch.as_tensor(rng.uniform(0, 3, (size, layout.joint_obs_dim))),
        joint_action=torch.as_tensor(rng.uniform(0, 3, (size, layout.joint_action_dim))),
        rewards=torch.full((size, layout.competitors), reward, dtype=torch.float64),
        joint_next_obs=torch.as_tensor(rng.uniform(0, 3, (size, layout.joint_obs_dim))),
        terminal=torch.full((size,), float(terminal), dtype=torch.float64),
    )


class TestAct(unittest.TestCase):
    def test_zero_actor_bids_half_budget(self):
        actor = _zero(Actor(4, 3))
        bids = act(actor, Observation.initial(3, 2.0), 2.0, 0.0, LABEL)
        assert bids.tolist() == [1.0, 1.0, 1.0]

    def test_bids_clipped_to_budget(self):
        actor = _seeded(Actor(6, 5), 1)
        obs = Observation(g_prev=np.array([3.0, 0, 0, 1.0, 0]), rb_prev=0.5)
        for noise in (0.0, 0.5, 5.0):
            bids = act(actor, obs, 3.0, noise, LABEL)
            assert np.all((bids >= 0) & (bids <= 3.0))

    def test_noisy_bids_reproducible(self):
        actor = _seeded(Actor(4, 3), 2)
        obs = Observation.initial(3, 3.0)
        first = act(actor, obs, 3.0, 0.2, LABEL, agent=1)
        second = act(actor, obs, 3.0, 0.2, LABEL, agent=1)
        np.testing.assert_array_equal(first, second)
        other_agent = act(actor, obs, 3.0, 0.2, LABEL, agent=0)
        assert not np.array_equal(first, other_agent)

    def test_noiseless_act_is_idempotent(self):
        actor = _seeded(Actor(4, 3), 4)
        obs = Observation.initial(3, 3.0)
        first = act(actor, obs, 3.0, 0.0, LABEL)
        second = act(actor, obs, 3.0, 0.0, RngLabel(master_seed=99))
        np.testing.assert_array_equal(first, second)

    def test_bids_scale_with_the_currency_unit(self):
        actor = _seeded(Actor(4, 3), 6)
        obs = Observation(g_prev=np.array([1.5, 0.0, 0.75]), rb_prev=0.75)
        rescaled = Observation(g_prev=obs.g_prev * 10, rb_prev=obs.rb_prev * 10)
        np.testing.assert_allclose(
            act(actor, rescaled, 30.0, 0.0, LABEL), 10 * act(actor, obs, 3.0, 0.0, LABEL), rtol=1e-12
        )

    def test_budget_must_be_positive(self):
        with pytest.raises(LearningError, match="budget"):
            act(Actor(4, 3), Observation.initial(3, 0.0), 0.0, 0.0, LABEL)

    def test_negative_noise_rejected(self):
        with pytest.raises(LearningError):
            act(Actor(4, 3), Observation.initial(3, 1.0), 1.0, -0.1, LABEL)

    def test_observation_size_checked(self):
        with pytest.raises(LearningError):
            act(Actor(5, 3), Observation.initial(3, 1.0), 1.0, 0.0, LABEL)


class TestCriticEval(unittest.TestCase):
    def test_zero_critic_is_zero(self):
        critic = _zero(Critic(6, 4))
        assert critic_eval(critic, np.ones(6), np.full(4, 2.0)) == 0.0

    def test_input_shapes_checked(self):
        critic = Critic(6, 4)
        with pytest.raises(LearningError):
            critic_eval(critic, np.ones(5), np.ones(4))
        with pytest.raises(LearningError):
            critic_eval(critic, np.ones(6), np.ones(3))

    def test_small_input_change_small_output_change(self):
        critic = _seeded(Critic(6, 4), 5)
        obs, action = np.full(6, 0.5), np.full(4, 0.5)
        base = critic_eval(critic, obs, action)
        nudged = obs.copy()
        nudged[2] += 1e-6
        assert abs(critic_eval(critic, nudged, action) - base) < 1e-3


class TestCriticUpdate(unittest.TestCase):
    def setUp(self):
        self.layout = JointLayout(competitors=2, seeds=2)
        dims = self.layout.critic_dims(centralized=True)
        self.critic = _zero(Critic(*dims))
        self.target_critic = _seeded(Critic(*dims), 7)
        self.target_actors = [_seeded(Actor(3, 2), 8), _seeded(Actor(3, 2), 9)]

    def test_terminal_constant_reward_loss(self):
        optimizer = torch.optim.Adam(self.critic.parameters(), lr=0.01)
        loss = critic_update(
            0, _batch(self.layout, 16, reward=2.5), self.critic, optimizer,
            self.target_actors, self.target_critic, self.layout, 0.95,
        )
        assert loss == pytest.approx(6.25)

    def test_no_discount_ignores_next_state(self):
        batch = _batch(self.layout, 8, reward=1.5, terminal=False)
        y = critic_targets(0, batch, self.target_actors, self.target_critic, self.layout, 0.0)
        assert torch.equal(y, torch.full((8,), 1.5, dtype=torch.float64))

    def test_bootstrap_uses_target_networks(self):
        batch = _batch(self.layout, 4, reward=0.0, terminal=False)
        y = critic_targets(1, batch, self.target_actors, self.target_critic, self.layout, 0.5)
        next_action = torch.cat(
            [self.target_actors[j](batch.joint_next_obs[:, 3 * j : 3 * j + 3]) for j in range(2)], dim=-1
        )
        expected = 0.5 * self.target_critic(batch.joint_next_obs, next_action)
        torch.testing.assert_close(y, expected.detach())

    def test_loss_decreases(self):
        optimizer = torch.optim.Adam(self.critic.parameters(), lr=0.01)
        batch = _batch(self.layout, 32, reward=1.0)
        losses = [
            critic_update(0, batch, self.critic, optimizer, self.target_actors, self.target_critic, self.layout, 0.95)
            for _ in range(50)
        ]
        assert losses[-1] < losses[0]

    def test_independent_critic_sees_own_slice(self):
        dims = self.layout.critic_dims(centralized=False)
        assert dims == (3, 2)
        critic, target = _zero(Critic(*dims)), _seeded(Critic(*dims), 1)
        optimizer = torch.optim.Adam(critic.parameters(), lr=0.01)
        loss = critic_update(
            1, _batch(self.layout, 4, reward=2.0), critic, optimizer,
            self.target_actors, target, self.layout, 0.95, centralized=False,
        )
        assert loss == pytest.approx(4.0)


class _QuadraticCritic(nn.Module):
    """Q = -(a_0 - target)^2 on agent 0's single action slot"""

    def __init__(self, target: float):
        super().__init__()
        self.target = target
        self.unused = nn.Parameter(torch.zeros(1, dtype=torch.float64))

    def forward(self, obs: torch.Tensor, action: torch.Tensor) -> torch.Tensor:  # noqa: ARG002
        return -((action[..., 0] - self.target) ** 2) + 0.0 * self.unused


class TestActorUpdate(unittest.TestCase):
    def test_zero_critic_leaves_actor_unchanged(self):
        layout = JointLayout(competitors=2, seeds=2)
        actor = _seeded(Actor(3, 2), 11)
        critic = _zero(Critic(*layout.critic_dims(centralized=True)))
        before = get_flat(actor)
        optimizer = torch.optim.Adam(actor.parameters(), lr=0.01)
        actor_update(0, _batch(layout, 8), actor, optimizer, critic, layout)
        np.testing.assert_array_equal(get_flat(actor), before)

    def test_synthetic_critic_drives_bid_to_optimum(self):
        layout = JointLayout(competitors=1, seeds=1)
        actor = _seeded(Actor(2, 1), 12)
        critic = _QuadraticCritic(0.7)
        optimizer = torch.optim.Adam(actor.parameters(), lr=0.01)
        batch = _batch(layout, 16, seed=3)
        for _ in range(400):
            actor_update(0, batch, actor, optimizer, critic, layout)
        with torch.no_grad():
            fractions = actor(batch.joint_obs)
        assert torch.all((fractions - 0.7).abs() < 0.05)

    def test_objective_value_matches_critic(self):
        layout = JointLayout(competitors=1, seeds=1)
        actor = _zero(Actor(2, 1))
        critic = _QuadraticCritic(0.5)
        optimizer = torch.optim.Adam(actor.parameters(), lr=0.01)
        value = actor_update(0, _batch(layout, 4), actor, optimizer, critic, layout)
        # zero actor bids exactly half its budget
        assert value == 0.0

    def test_regularization_pulls_logits_toward_zero(self):
        layout = JointLayout(competitors=2, seeds=2)
        actor = _seeded(Actor(3, 2), 13)
        with torch.no_grad():
            actor.l3.bias.fill_(4.0)
        critic = _zero(Critic(*layout.critic_dims(centralized=True)))
        batch = _batch(layout, 8)
        optimizer = torch.optim.Adam(actor.parameters(), lr=1e-3)
        before = float(logit_penalty(0, actor, batch, layout))
        value = actor_update(0, batch, actor, optimizer, critic, layout, regularization=0.5)
        assert value == 0.0
        assert float(logit_penalty(0, actor, batch, layout)) < before

    def test_regularization_bounds_bids_against_a_rising_critic(self):
        layout = JointLayout(competitors=1, seeds=1)
        batch = _batch(layout, 16, seed=4)
        saturated, held = _seeded(Actor(2, 1), 14), _seeded(Actor(2, 1), 14)
        # Q keeps growing with the bid, so only the penalty can stop the logit
        critic = _QuadraticCritic(5.0)
        for actor, regularization in ((saturated, 0.0), (held, 1.0)):
            optimizer = torch.optim.Adam(actor.parameters(), lr=0.01)
            for _ in range(300):
                actor_update(0, batch, actor, optimizer, critic, layout, regularization=regularization)
        assert float(logit_penalty(0, held, batch, layout)) < float(logit_penalty(0, saturated, batch, layout))
        with torch.no_grad():
            assert torch.all(held.logits(batch.joint_obs).abs() < 4.0)

    def test_negative_regularization_rejected(self):
        layout = JointLayout(competitors=1, seeds=1)
        actor = Actor(2, 1)
        optimizer = torch.optim.Adam(actor.parameters(), lr=0.01)
        with pytest.raises(LearningError, match="regularization"):
            actor_update(0, _batch(layout, 2), actor, optimizer, _QuadraticCritic(0.5), layout, regularization=-1.0)


class TestSoftUpdate(unittest.TestCase):
    def test_hard_update(self):
        online, target = _seeded(Critic(3, 2), 1), _seeded(Critic(3, 2), 2)
        soft_update(online, target, 1.0)
        np.testing.assert_array_equal(get_flat(target), get_flat(online))

    def test_fixed_point(self):
        online = _seeded(Actor(3, 2), 1)
        target = _seeded(Actor(3, 2), 1)
        soft_update(online, target, 0.01)
        np.testing.assert_array_equal(get_flat(target), get_flat(online))

    def test_midpoint(self):
        online, target = Actor(3, 2), Actor(3, 2)
        with torch.no_grad():
            for p in online.parameters():
                p.fill_(1.0)
        _zero(target)
        soft_update(online, target, 0.5)
        assert np.all(get_flat(target) == 0.5)

    def test_shape_mismatch(self):
        with pytest.raises(LearningError):
            soft_update(Actor(3, 2), Actor(4, 2), 0.5)

    def test_tau_range(self):
        with pytest.raises(LearningError):
            soft_update(Actor(3, 2), Actor(3, 2), 0.0)


def test_non_finite_parameter_reported():
    actor = Actor(3, 2)
    with torch.no_grad():
        actor.l2.bias[0] = float("nan")
    with pytest.raises(NumericFailureError, match="l2.bias") as excinfo:
        assert_finite(actor, 1, "actor")
    assert excinfo.value.agent == 1
