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

import time

import numpy as np
from cbim_marl.models import Transition, joint_observation
from cbim_marl.policies import BiddingPolicy
from cbim_network.rng import RngLabel

from cbim_harness.environment import BiddingEnvironment
from cbim_harness.records import EpisodeRecord


def run_round(
    env: BiddingEnvironment,
    agents: BiddingPolicy,
    rng_label: RngLabel,
    *,
    noise_std: float = 0.0,
    terminal: bool = False,
    normalize_rewards: bool = True,
    record_wall_time: bool = True,
) -> tuple[EpisodeRecord, Transition]:
    """Play one round: act, auction, diffuse, reprice.

    The transition's rewards are divided by the node count when
    `normalize_rewards` is set; the record always keeps raw spreads.
    """
    start = time.perf_counter()
    observations = list(env.observations)
    joint_obs = joint_observation(observations)
    bids = np.asarray(agents.act(observations, noise_std, rng_label), dtype=np.float64)
    step = env.step(bids, rng_label)
    elapsed = time.perf_counter() - start

    scale = env.graph.node_count if normalize_rewards else 1
    transition = Transition(
        joint_obs=joint_obs,
        joint_action=bids.reshape(-1),
        rewards=np.asarray(step.rewards, dtype=np.float64) / scale,
        joint_next_obs=joint_observation(env.observations),
        terminal=terminal,
    )
    outcome = step.auction
    record = EpisodeRecord(
        iteration=rng_label.iteration,
        round_index=rng_label.round_index,
        rewards=step.rewards,
        costs=tuple(float(c) for c in outcome.costs),
        budgets=tuple(float(b) for b in env.budgets),
        prices=tuple(float(p) for p in step.prices),
        effective_prices=tuple(tuple(float(g) for g in row) for row in outcome.effective_prices),
        ge=step.ge,
        all_sold=outcome.all_sold,
        fair=step.ge <= env.rho,
        revenue=sum(step.rewards),
        wall_time=elapsed if record_wall_time else 0.0,
    )
    return record, transition
