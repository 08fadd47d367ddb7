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

import itertools

import networkx as nx
import numpy as np
import pytest

from cbim_network.errors import GraphError
from cbim_network.graph import (
    assign_weights,
    generate_preferential_attachment,
    sample_thresholds,
    select_seeds_by_degree,
    to_networkx,
)
from cbim_network.models.graph import SeedSet, WeightedGraph
from cbim_network.parsers.edge_list import build_graph, parse_edge_list_string
from cbim_network.rng import RngLabel


def _incoming_sums(graph: WeightedGraph) -> np.ndarray:
    return np.bincount(graph.targets, weights=graph.weights, minlength=graph.node_count)


def test_directed_weights_split_evenly():
    graph = parse_edge_list_string("0 2\n1 2", directed=True)
    assert [w for _, _, w in graph.edges] == [0.5, 0.5]


def test_single_arc_has_unit_weight():
    graph = parse_edge_list_string("0 1", directed=True)
    assert graph.edges == [(0, 1, 1.0)]


def test_undirected_triangle_weights():
    graph = parse_edge_list_string("0 1\n1 2\n2 0", directed=False)
    assert graph.edge_count == 6
    assert all(w == 0.5 for _, _, w in graph.edges)


def test_assign_weights_rejects_edgeless_graph():
    empty = WeightedGraph.from_arcs(3, [], [], [], directed=True)
    with pytest.raises(GraphError):
        assign_weights(empty)


@pytest.mark.parametrize("directed", [True, False])
def test_incoming_weights_sum_to_one(directed: bool):
    rng = np.random.default_rng(3)
    pairs = [tuple(int(x) for x in rng.integers(0, 40, 2)) for _ in range(150)]
    graph = build_graph(pairs, directed=directed)
    sums = _incoming_sums(graph)
    reachable = graph.in_degree > 0
    np.testing.assert_allclose(sums[reachable], 1.0, atol=1e-9)
    assert np.all(graph.weights > 0) and np.all(graph.weights <= 1)


def test_weights_match_networkx_in_degree():
    graph = generate_preferential_attachment(60, 2, seed=4)
    nx_graph = to_networkx(graph)
    for u, v, data in nx_graph.edges(data=True):
        assert data["weight"] == pytest.approx(1.0 / nx_graph.in_degree(v))
        assert (u, v) in nx_graph.edges


def test_thresholds_deterministic_per_label():
    graph = parse_edge_list_string("0 1\n1 2\n2 3", directed=True)
    label = RngLabel(master_seed=11, iteration=2, round_index=5)
    first = sample_thresholds(graph, label)
    second = sample_thresholds(graph, label)
    np.testing.assert_array_equal(first.xi, second.xi)
    assert first.rng_label == label


def test_thresholds_differ_across_rounds():
    graph = generate_preferential_attachment(50, 2, seed=1)
    a = sample_thresholds(graph, RngLabel(master_seed=1, iteration=0, round_index=0))
    b = sample_thresholds(graph, RngLabel(master_seed=1, iteration=0, round_index=1))
    assert not np.array_equal(a.xi, b.xi)


def test_threshold_mean_is_one_half():
    graph = WeightedGraph.from_arcs(100_000, [0], [1], [1.0], directed=True)
    draw = sample_thresholds(graph, RngLabel(master_seed=0))
    assert np.all((draw.xi >= 0) & (draw.xi < 1))
    assert 0.49 <= draw.xi.mean() <= 0.51


def test_star_center_selected():
    graph = parse_edge_list_string("0 1\n0 2\n0 3\n0 4\n0 5", directed=False)
    assert select_seeds_by_degree(graph, 1) == SeedSet(seeds=(0,))


def test_path_tie_break_by_lower_id():
    graph = parse_edge_list_string("0 1\n1 2", directed=False)
    assert select_seeds_by_degree(graph, 2).seeds == (1, 0)


def test_directed_uses_out_degree():
    graph = parse_edge_list_string("0 2\n1 2\n3 2\n2 4", directed=True)
    assert select_seeds_by_degree(graph, 1).seeds == (0,)


def test_top_degree_matches_brute_force():
    rng = np.random.default_rng(9)
    for _ in range(20):
        pairs = [tuple(int(x) for x in rng.integers(0, 5, 2)) for _ in range(6)]
        pairs = [p for p in pairs if p[0] != p[1]] or [(0, 1)]
        graph = build_graph(pairs, directed=False)
        degrees = {v: int(graph.out_degree[v]) for v in range(graph.node_count)}
        count = min(3, graph.node_count)
        best = max(
            itertools.permutations(range(graph.node_count), count),
            key=lambda combo: (
                [degrees[v] for v in combo],
                [-v for v in combo],
            ),
        )
        assert select_seeds_by_degree(graph, count).seeds == best


def test_seed_selection_invariant_under_edge_order():
    pairs = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 0)]
    graph = build_graph(pairs, directed=True)
    shuffled = build_graph(list(reversed(pairs)), directed=True)
    assert select_seeds_by_degree(graph, 3) == select_seeds_by_degree(shuffled, 3)


@pytest.mark.parametrize("count", [0, -1, 10])
def test_invalid_seed_count(count: int):
    graph = parse_edge_list_string("0 1\n1 2", directed=False)
    with pytest.raises(GraphError):
        select_seeds_by_degree(graph, count)


def test_seed_set_rejects_duplicates():
    with pytest.raises(ValueError, match="duplicate"):
        SeedSet(seeds=(1, 2, 1))


def test_preferential_attachment_degree_matches_networkx():
    graph = generate_preferential_attachment(200, 3, seed=7)
    reference = nx.barabasi_albert_graph(200, 3, seed=7)
    assert graph.edge_count == 2 * reference.number_of_edges()
    for v in range(200):
        assert graph.out_degree[v] == reference.degree(v)
