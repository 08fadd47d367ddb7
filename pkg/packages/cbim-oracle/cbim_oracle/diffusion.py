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
Brute-force competitive diffusion oracle.

Recomputes every node's situation from scratch on each sweep using plain
Python lists: for each still-open node, the summed weight of its in-neighbours
owned by each competitor at the start of the sweep. Nodes whose best sum beats
their threshold are claimed together at the end of the sweep.
"""

import itertools

import numpy as np
from pydantic import BaseModel

from cbim_network.diffusion import diffuse_clt, single_seed_spreads, spread
from cbim_network.graph import assign_weights
from cbim_network.models.diffusion import UNACTIVATED, Allocation, DiffusionResult
from cbim_network.models.graph import SeedSet, ThresholdDraw, WeightedGraph
from cbim_network.rng import RngLabel, stream
from cbim_oracle.errors import OracleError
from cbim_oracle.models import OracleReport

MAX_ORACLE_NODES = 64
MAX_INSTANCE_NODES = 12
MAX_INSTANCE_COMPETITORS = 3
DIFFUSION_STREAM = "oracle-diffusion"
MONOTONICITY_STREAM = "oracle-monotonicity"


def fixpoint_diffusion(
    graph: WeightedGraph,
    thresholds: ThresholdDraw,
    seeds: SeedSet,
    alloc: Allocation,
    t_up: int,
) -> DiffusionResult:
    n = graph.node_count
    if n > MAX_ORACLE_NODES:
        raise OracleError(OracleError.GRAPH_TOO_LARGE.format(MAX_ORACLE_NODES, n))
    incoming: dict[int, list[tuple[int, float]]] = {v: [] for v in range(n)}
    for u, v, w in zip(graph.sources.tolist(), graph.targets.tolist(), graph.weights.tolist(), strict=True):
        incoming[v].append((u, w))
    xi = thresholds.xi.tolist()

    owner: list[int | None] = [None] * n
    blocked = [False] * n
    for node, competitor in zip(seeds.seeds, alloc.owners, strict=True):
        if competitor is None:
            blocked[node] = True
        else:
            owner[node] = competitor

    sweeps = 0
    while sweeps < t_up:
        snapshot = list(owner)
        claims = {}
        for v in range(n):
            if snapshot[v] is not None or blocked[v]:
                continue
            sums = [0.0] * alloc.competitors
            for u, w in incoming[v]:
                if snapshot[u] is not None:
                    sums[snapshot[u]] += w
            qualified = [i for i in range(alloc.competitors) if sums[i] > xi[v]]
            if qualified:
                best = max(sums[i] for i in qualified)
                claims[v] = min(i for i in qualified if sums[i] == best)
        if not claims:
            break
        for v, competitor in claims.items():
            owner[v] = competitor
        sweeps += 1

    owner_of_node = np.array([UNACTIVATED if o is None else o for o in owner], dtype=np.int64)
    return DiffusionResult(owner_of_node=owner_of_node, competitors=alloc.competitors, steps_used=sweeps)


class DiffusionInstance(BaseModel):
    """A small random diffusion problem, stored as plain data for replay"""

    node_count: int
    arcs: list[tuple[int, int]]
    directed: bool
    xi: list[float]
    seeds: tuple[int, ...]
    owners: tuple[int | None, ...]
    competitors: int
    t_up: int

    def graph(self) -> WeightedGraph:
        if not self.arcs:
            return WeightedGraph.from_arcs(self.node_count, [], [], [], directed=self.directed)
        src, dst = zip(*self.arcs, strict=True)
        raw = WeightedGraph.from_arcs(self.node_count, src, dst, np.ones(len(src)), directed=self.directed)
        return assign_weights(raw)

    def thresholds(self) -> ThresholdDraw:
        return ThresholdDraw(xi=np.asarray(self.xi), rng_label=RngLabel(master_seed=0))

    def seed_set(self) -> SeedSet:
        return SeedSet(seeds=self.seeds)

    def allocation(self) -> Allocation:
        return Allocation(owners=self.owners, competitors=self.competitors)


def random_instance(
    rng: np.random.Generator,
    max_nodes: int = MAX_INSTANCE_NODES,
    max_competitors: int = MAX_INSTANCE_COMPETITORS,
) -> DiffusionInstance:
    n = int(rng.integers(1, max_nodes + 1))
    directed = bool(rng.random() < 0.5)
    density = float(rng.uniform(0.1, 0.6))
    arcs = set()
    for u, v in itertools.permutations(range(n), 2):
        if (directed or u < v) and rng.random() < density:
            arcs.add((u, v))
            if not directed:
                arcs.add((v, u))
    k = int(rng.integers(1, max_competitors + 1))
    seed_count = int(rng.integers(1, n + 1))
    seeds = tuple(int(v) for v in rng.permutation(n)[:seed_count])
    owners = tuple(None if rng.random() < 0.2 else int(rng.integers(0, k)) for _ in seeds)
    t_up = n if rng.random() < 0.7 else int(rng.integers(1, n + 1))
    return DiffusionInstance(
        node_count=n,
        arcs=sorted(arcs),
        directed=directed,
        xi=rng.random(n).tolist(),
        seeds=seeds,
        owners=owners,
        competitors=k,
        t_up=t_up,
    )


def check_diffusion(trials: int, master_seed: int = 0) -> OracleReport:
    """diffuse_clt and single_seed_spreads against the fixed-point oracle"""
    report = OracleReport(suite="diffusion", trials=trials)
    for trial in range(trials):
        instance = random_instance(stream(master_seed, DIFFUSION_STREAM, trial))
        graph, thresholds = instance.graph(), instance.thresholds()
        seeds, alloc = instance.seed_set(), instance.allocation()

        expected = fixpoint_diffusion(graph, thresholds, seeds, alloc, instance.t_up)
        actual = diffuse_clt(graph, thresholds, seeds, alloc, instance.t_up)
        if actual.activated_by != expected.activated_by or actual.steps_used != expected.steps_used:
            report.record(
                trial,
                f"activated sets {actual.activated_by} != {expected.activated_by}",
                instance=instance.model_dump(),
            )
            continue

        standalone = single_seed_spreads(graph, thresholds, seeds, instance.t_up)
        for position, node in enumerate(seeds.seeds):
            alone = fixpoint_diffusion(
                graph, thresholds, SeedSet(seeds=(node,)), Allocation(owners=(0,), competitors=1), instance.t_up
            )
            if standalone[position] != spread(alone, 0):
                report.record(
                    trial,
                    f"standalone spread of seed {node}: {standalone[position]} != {spread(alone, 0)}",
                    instance=instance.model_dump(),
                )
                break
    return report


def check_monotonicity(trials: int, master_seed: int = 0) -> OracleReport:
    """With one competitor, adding seeds never shrinks the spread"""
    report = OracleReport(suite="monotonicity", trials=trials)
    for trial in range(trials):
        rng = stream(master_seed, MONOTONICITY_STREAM, trial)
        instance = random_instance(rng, max_competitors=1)
        graph, thresholds = instance.graph(), instance.thresholds()
        larger = instance.seeds
        smaller = tuple(s for s in larger if rng.random() < 0.5)
        results = []
        for chosen in (smaller, larger):
            alloc = Allocation(owners=(0,) * len(chosen), competitors=1)
            result = diffuse_clt(graph, thresholds, SeedSet(seeds=chosen), alloc, graph.node_count or 1)
            results.append(spread(result, 0))
        if results[0] > results[1]:
            report.record(
                trial,
                f"spread {results[0]} of {smaller} exceeds spread {results[1]} of {larger}",
                instance=instance.model_dump(),
                smaller=list(smaller),
            )
    return report
