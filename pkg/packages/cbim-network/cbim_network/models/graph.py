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
from pydantic import BaseModel, ConfigDict, field_validator
from scipy import sparse

from cbim_network.errors import GraphError
from cbim_network.rng import RngLabel


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class WeightedGraph(BaseModel):
    """Directed influence graph with per-arc weights w_uv.

    Undirected inputs are stored as two arcs per edge. Node ids are dense
    integers in [0, node_count); `original_ids[v]` is the id used in the input.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    node_count: int
    directed: bool
    sources: np.ndarray
    targets: np.ndarray
    weights: np.ndarray
    in_degree: np.ndarray
    out_degree: np.ndarray
    original_ids: np.ndarray
    # in_matrix[v, u] = w_uv, so in_matrix @ active sums the active in-weights of v
    in_matrix: sparse.csr_matrix

    @classmethod
    def from_arcs(
        cls,
        node_count: int,
        sources: Sequence[int] | np.ndarray,
        targets: Sequence[int] | np.ndarray,
        weights: Sequence[float] | np.ndarray,
        *,
        directed: bool,
        original_ids: Sequence[int] | np.ndarray | None = None,
    ) -> "WeightedGraph":
        src = np.asarray(sources, dtype=np.int64)
        dst = np.asarray(targets, dtype=np.int64)
        w = np.asarray(weights, dtype=np.float64)
        if original_ids is None:
            original_ids = np.arange(node_count, dtype=np.int64)
        in_matrix = sparse.csr_matrix(
            (w, (dst, src)), shape=(node_count, node_count), dtype=np.float64
        )
        return cls(
            node_count=node_count,
            directed=directed,
            sources=_frozen(src),
            targets=_frozen(dst),
            weights=_frozen(w),
            in_degree=_frozen(np.bincount(dst, minlength=node_count)),
            out_degree=_frozen(np.bincount(src, minlength=node_count)),
            original_ids=_frozen(np.asarray(original_ids, dtype=np.int64)),
            in_matrix=in_matrix,
        )

    @property
    def edge_count(self) -> int:
        return int(self.sources.size)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [
            (int(u), int(v), float(w))
            for u, v, w in zip(self.sources, self.targets, self.weights, strict=True)
        ]


class ThresholdDraw(BaseModel):
    """Per-node activation thresholds xi_v for one bidding round"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    xi: np.ndarray
    rng_label: RngLabel

    @field_validator("xi")
    @classmethod
    def _check_range(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 1 or np.any(value < 0.0) or np.any(value > 1.0):
            raise ValueError("thresholds must be a vector with entries in [0, 1]")
        return _frozen(np.array(value, dtype=np.float64))


class SeedSet(BaseModel):
    """The auctioned seeds, in their fixed auction order"""

    model_config = ConfigDict(frozen=True)

    seeds: tuple[int, ...]

    @field_validator("seeds")
    @classmethod
    def _check_unique(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        seen: set[int] = set()
        for node in value:
            if node in seen:
                raise ValueError(GraphError.DUPLICATE_SEED.format(node))
            seen.add(node)
        return value

    @property
    def size(self) -> int:
        return len(self.seeds)

    def validate_for(self, graph: WeightedGraph) -> None:
        for node in self.seeds:
            if not 0 <= node < graph.node_count:
                raise GraphError(GraphError.UNKNOWN_NODE.format(node, graph.node_count))
