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
Competitive Linear Threshold (CLT) diffusion.

All competitors propagate at once in synchronous steps. At each step an
inactive, non-blocked node v is claimed by competitor i when the summed weight
of v's in-neighbours already active for i strictly exceeds xi_v. When several
competitors qualify in the same step, the one with the largest summed weight
wins; exact ties go to the lowest competitor index. A node activated at step s
starts influencing others at step s + 1. Seeds whose auction failed are
blocked: they are never activated and never influence anyone.
"""

import logging

import numpy as np

from cbim_network.errors import GraphError
from cbim_network.models.diffusion import UNACTIVATED, Allocation, DiffusionResult
from cbim_network.models.graph import SeedSet, ThresholdDraw, WeightedGraph

logger = logging.getLogger(__name__)


def _check_inputs(
    graph: WeightedGraph,
    thresholds: ThresholdDraw,
    seeds: SeedSet,
    t_up: int,
) -> None:
    if thresholds.xi.size != graph.node_count:
        raise GraphError(
            GraphError.THRESHOLD_SHAPE.format(thresholds.xi.size, graph.node_count)
        )
    if t_up < 1:
        raise GraphError(GraphError.STEP_LIMIT.format(t_up))
    seeds.validate_for(graph)


def diffuse_clt(
    graph: WeightedGraph,
    thresholds: ThresholdDraw,
    seeds: SeedSet,
    alloc: Allocation,
    t_up: int,
    *,
    with_seed_spreads: bool = False,
) -> DiffusionResult:
    """Run one competitive diffusion from the allocated seeds.

    With `with_seed_spreads` the result also carries every seed's standalone
    spread under the same thresholds (see `single_seed_spreads`).
    """
    _check_inputs(graph, thresholds, seeds, t_up)
    if len(alloc.owners) != seeds.size:
        raise GraphError(GraphError.ALLOCATION_SHAPE.format(len(alloc.owners), seeds.size))

    k = alloc.competitors
    owner = np.full(graph.node_count, UNACTIVATED, dtype=np.int64)
    blocked = np.zeros(graph.node_count, dtype=bool)
    for node, competitor in zip(seeds.seeds, alloc.owners, strict=True):
        if competitor is None:
            blocked[node] = True
            continue
        if not 0 <= competitor < k:
            raise GraphError(GraphError.COMPETITOR_INDEX.format(competitor, k))
        owner[node] = competitor

    xi = thresholds.xi[:, None]
    steps_used = 0
    for _ in range(t_up):
        active = np.zeros((graph.node_count, k))
        claimed = np.flatnonzero(owner != UNACTIVATED)
        active[claimed, owner[claimed]] = 1.0
        pressure = graph.in_matrix @ active

        open_nodes = (owner == UNACTIVATED) & ~blocked
        qualifies = (pressure > xi) & open_nodes[:, None]
        newly = qualifies.any(axis=1)
        if not newly.any():
            break
        contest = np.where(qualifies[newly], pressure[newly], -np.inf)
        # argmax keeps the first maximum, i.e. the lowest competitor index
        owner[newly] = contest.argmax(axis=1)
        steps_used += 1

    per_seed_spread = single_seed_spreads(graph, thresholds, seeds, t_up) if with_seed_spreads else ()
    return DiffusionResult(
        owner_of_node=owner, competitors=k, steps_used=steps_used, per_seed_spread=per_seed_spread
    )


def spread(result: DiffusionResult, competitor: int) -> int:
    """Influence spread sigma(S_i): number of nodes activated for `competitor`"""
    if not 0 <= competitor < result.competitors:
        raise GraphError(GraphError.COMPETITOR_INDEX.format(competitor, result.competitors))
    return int(np.count_nonzero(result.owner_of_node == competitor))


def single_seed_spreads(
    graph: WeightedGraph,
    thresholds: ThresholdDraw,
    seeds: SeedSet,
    t_up: int,
) -> tuple[int, ...]:
    """Standalone spread of every seed under the round's thresholds.

    Each seed diffuses alone (no competition, no blocked seeds). The l runs are
    independent, so they are carried as l columns of one boolean state and
    advanced together.
    """
    _check_inputs(graph, thresholds, seeds, t_up)
    columns = np.arange(seeds.size)
    active = np.zeros((graph.node_count, seeds.size), dtype=bool)
    active[list(seeds.seeds), columns] = True

    xi = thresholds.xi[:, None]
    for _ in range(t_up):
        pressure = graph.in_matrix @ active.astype(np.float64)
        newly = (pressure > xi) & ~active
        if not newly.any():
            break
        active |= newly
    return tuple(int(c) for c in active.sum(axis=0))


def degree_proxy_spreads(
    graph: WeightedGraph, seeds: SeedSet, alloc: Allocation
) -> tuple[int, ...]:
    """Fast reward proxy: |S_i| plus the summed out-degree of S_i's seeds"""
    rewards = [0] * alloc.competitors
    for node, competitor in zip(seeds.seeds, alloc.owners, strict=True):
        if competitor is not None:
            rewards[competitor] += 1 + int(graph.out_degree[node])
    return tuple(rewards)


def degree_proxy_seed_spreads(graph: WeightedGraph, seeds: SeedSet) -> tuple[int, ...]:
    """Per-seed counterpart of `degree_proxy_spreads`"""
    return tuple(1 + int(graph.out_degree[node]) for node in seeds.seeds)
