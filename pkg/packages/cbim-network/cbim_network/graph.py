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
Influence weights, activation thresholds and degree-heuristic seed selection.
"""

import logging

import networkx as nx
import numpy as np

from cbim_network.errors import GraphError
from cbim_network.models.graph import SeedSet, ThresholdDraw, WeightedGraph
from cbim_network.rng import RngLabel

logger = logging.getLogger(__name__)

THRESHOLD_STREAM = "thresholds"


def assign_weights(graph: WeightedGraph) -> WeightedGraph:
    """Apply the influence-weight rule to every arc.

    Directed graphs get w_uv = 1/|N_in(v)|, undirected graphs w_uv = 1/|N(v)|.
    Undirected graphs are stored with both arcs, so |N(v)| equals the in-degree
    of v in arc form and both branches reduce to the same vector expression.
    """
    if graph.edge_count == 0:
        raise GraphError(GraphError.EMPTY_GRAPH)
    if graph.directed:
        denominators = graph.in_degree[graph.targets]
    else:
        denominators = (graph.in_degree + graph.out_degree)[graph.targets] / 2
    weights = 1.0 / denominators
    return WeightedGraph.from_arcs(
        graph.node_count,
        graph.sources,
        graph.targets,
        weights,
        directed=graph.directed,
        original_ids=graph.original_ids,
    )


def sample_thresholds(graph: WeightedGraph, rng_label: RngLabel) -> ThresholdDraw:
    """Draw xi_v ~ U[0, 1) i.i.d. per node from the round's threshold stream"""
    xi = rng_label.generator(THRESHOLD_STREAM).random(graph.node_count)
    return ThresholdDraw(xi=xi, rng_label=rng_label)


def seed_degrees(graph: WeightedGraph) -> np.ndarray:
    """Degree used by the seed heuristic: out-degree (directed) or degree"""
    return graph.out_degree


def select_seeds_by_degree(graph: WeightedGraph, l: int) -> SeedSet:
    """Pick the l highest-degree nodes, ties broken by lower node id.

    The returned order (descending degree, then ascending id) is the auction
    order for the whole scenario.
    """
    if l <= 0 or l > graph.node_count:
        raise GraphError(GraphError.SEED_COUNT.format(graph.node_count, l))
    degrees = seed_degrees(graph)
    ids = np.arange(graph.node_count)
    order = np.lexsort((ids, -degrees))
    seeds = tuple(int(v) for v in order[:l])
    logger.debug("Selected seeds %s with degrees %s", seeds, degrees[list(seeds)])
    return SeedSet(seeds=seeds)


def generate_preferential_attachment(
    node_count: int, attach: int, seed: int
) -> WeightedGraph:
    """Undirected preferential-attachment graph with the influence weights applied"""
    nx_graph = nx.barabasi_albert_graph(node_count, attach, seed=seed)
    pairs = np.asarray(sorted(nx_graph.edges()), dtype=np.int64)
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    order = np.lexsort((dst, src))
    graph = WeightedGraph.from_arcs(
        node_count,
        src[order],
        dst[order],
        np.ones(src.size),
        directed=False,
    )
    return assign_weights(graph)


def to_networkx(graph: WeightedGraph) -> nx.DiGraph:
    """Export the arc set (with weights) as a networkx DiGraph"""
    nx_graph = nx.DiGraph()
    nx_graph.add_nodes_from(range(graph.node_count))
    nx_graph.add_weighted_edges_from(graph.edges)
    return nx_graph
