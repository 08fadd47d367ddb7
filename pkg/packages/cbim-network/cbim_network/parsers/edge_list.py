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

from collections.abc import Generator, Iterable
from io import StringIO
from pathlib import Path
from typing import IO

import numpy as np

from cbim_network.graph import assign_weights
from cbim_network.models.graph import WeightedGraph


class EdgeListParseError(Exception):
    """Raised when SNAP edge-list parsing fails"""

    # Error messages
    INVALID_LINE_FORMAT = "Line {}: expected two integer node ids, got {!r}"
    EMPTY_GRAPH = "Edge list contains no edges (after dropping self-loops)"
    NOT_UTF8 = "Line {}: not valid UTF-8 ({})"


# Constants
EXPECTED_PARTS = 2
COMMENT_PREFIX = "#"
ENCODING = "utf-8"


def decode_lines(stream: IO[bytes]) -> Generator[str, None, None]:
    """Decode a binary stream one line at a time

    Raises:
      EdgeListParseError: If a line is not valid UTF-8
    """
    for line_number, raw in enumerate(stream, start=1):
        try:
            yield raw.decode(ENCODING)
        except UnicodeDecodeError as e:
            raise EdgeListParseError(EdgeListParseError.NOT_UTF8.format(line_number, e.reason)) from e


def parse_edge_lines(stream: Iterable[str]) -> Generator[tuple[int, int], None, None]:
    """Yield (u, v) pairs from a SNAP edge list

    Args:
      stream: Text lines; lines starting with '#' and blank lines are skipped

    Returns:
      Generator of (u, v) original-id pairs, in file order

    Raises:
      EdgeListParseError: If a line does not hold exactly two integers
    """
    for line_number, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIX):
            continue
        parts = line.split()
        if len(parts) != EXPECTED_PARTS:
            raise EdgeListParseError(
                EdgeListParseError.INVALID_LINE_FORMAT.format(line_number, line)
            )
        try:
            yield int(parts[0]), int(parts[1])
        except ValueError as e:
            raise EdgeListParseError(
                EdgeListParseError.INVALID_LINE_FORMAT.format(line_number, line)
            ) from e


def build_graph(pairs: list[tuple[int, int]], *, directed: bool) -> WeightedGraph:
    """Re-index original ids densely and collapse the pairs into a simple graph.

    Dense ids follow ascending original id, so "lower dense id" and "lower
    original id" agree for tie-breaking.
    """
    if not pairs:
        raise EdgeListParseError(EdgeListParseError.EMPTY_GRAPH)
    raw = np.asarray(pairs, dtype=np.int64)
    original_ids, dense = np.unique(raw, return_inverse=True)
    dense = dense.reshape(raw.shape)
    src, dst = dense[:, 0], dense[:, 1]
    if not directed:
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])

    keep = src != dst
    src, dst = src[keep], dst[keep]
    if src.size == 0:
        raise EdgeListParseError(EdgeListParseError.EMPTY_GRAPH)

    node_count = int(original_ids.size)
    codes = np.unique(src * node_count + dst)
    src, dst = codes // node_count, codes % node_count

    graph = WeightedGraph.from_arcs(
        node_count,
        src,
        dst,
        np.ones(src.size),
        directed=directed,
        original_ids=original_ids,
    )
    return assign_weights(graph)


def parse_edge_list_string(content: str, *, directed: bool) -> WeightedGraph:
    """Parse edge-list text into a weighted graph"""
    return build_graph(list(parse_edge_lines(StringIO(content))), directed=directed)


def load_edge_list(path: str | Path, *, directed: bool) -> WeightedGraph:
    """Load a SNAP edge list from disk.

    The returned graph already carries the influence weights of `assign_weights`.

    Raises:
      FileNotFoundError: If the file does not exist
      EdgeListParseError: If a line is malformed or not UTF-8, or the graph is empty
    """
    with Path(path).open("rb") as stream:
        pairs = list(parse_edge_lines(decode_lines(stream)))
    return build_graph(pairs, directed=directed)


def format_edge_list(graph: WeightedGraph) -> str:
    """Render a graph as SNAP edge-list text using its original node ids.

    Undirected graphs list each edge once, lower dense id first.
    """
    ids = graph.original_ids
    kind = "Directed" if graph.directed else "Undirected"
    pairs = [
        (int(u), int(v))
        for u, v in zip(graph.sources, graph.targets, strict=True)
        if graph.directed or u < v
    ]
    lines = [
        f"# {kind} graph",
        f"# Nodes: {graph.node_count} Edges: {len(pairs)}",
        "# FromNodeId\tToNodeId",
    ]
    lines.extend(f"{ids[u]}\t{ids[v]}" for u, v in pairs)
    return "\n".join(lines) + "\n"


def write_edge_list(graph: WeightedGraph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(graph), encoding=ENCODING)
