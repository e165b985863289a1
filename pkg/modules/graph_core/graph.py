"""
modules/graph_core/graph.py

Immutable weighted graph. Every construction in the toolkit runs on the
shortest-path metric of one of these.

Edges are normalized on construction: self-loops are dropped, parallel edges
collapse to their minimum weight, and connectivity is enforced.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from modules.errors import DisconnectedGraphError, GraphParseError, ParameterError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, float]


def vertex_set(values: Iterable[int]) -> np.ndarray:
    """Sorted, duplicate-free int64 array: the toolkit's VertexSet."""
    arr = np.fromiter((int(v) for v in values), dtype=np.int64)
    return np.unique(arr)


@dataclass(frozen=True)
class GraphSource:
    """Where a graph came from and what normalization touched it."""

    path: str | None = None
    format: str | None = None
    dropped_self_loops: int = 0
    merged_parallel_edges: int = 0

    @property
    def warning_count(self) -> int:
        return self.dropped_self_loops + self.merged_parallel_edges


@dataclass(frozen=True)
class WeightedGraph:
    vertex_count: int
    edges: Tuple[Edge, ...]
    source: GraphSource = field(default_factory=GraphSource, compare=False)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------
    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[Sequence[float]],
        *,
        path: str | None = None,
        format: str | None = None,
        require_connected: bool = True,
    ) -> "WeightedGraph":
        if vertex_count < 1:
            raise ParameterError(f"vertex_count must be positive, got {vertex_count}")

        best: dict[tuple[int, int], float] = {}
        self_loops = 0
        parallel = 0
        for raw in edges:
            u, v, w = int(raw[0]), int(raw[1]), float(raw[2])
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphParseError(f"edge ({u}, {v}) has a vertex id outside 0..{vertex_count - 1}", path=path)
            if not np.isfinite(w) or w < 0:
                raise GraphParseError(f"edge ({u}, {v}) has invalid weight {w}", path=path)
            if u == v:
                self_loops += 1
                continue
            key = (u, v) if u < v else (v, u)
            if key in best:
                parallel += 1
                best[key] = min(best[key], w)
            else:
                best[key] = w

        if self_loops or parallel:
            logger.warning(
                "Normalized graph%s: dropped %d self-loops, merged %d parallel edges",
                f" from {path}" if path else "",
                self_loops,
                parallel,
            )

        graph = cls(
            vertex_count=vertex_count,
            edges=tuple((u, v, w) for (u, v), w in sorted(best.items())),
            source=GraphSource(path, format, self_loops, parallel),
        )
        if require_connected:
            graph.ensure_connected()
        return graph

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------
    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> csr_matrix:
        """Symmetric CSR matrix; zero-weight edges are stored as explicit zeros."""
        n = self.vertex_count
        if not self.edges:
            return csr_matrix((n, n), dtype=np.float64)
        arr = np.asarray(self.edges, dtype=np.float64)
        rows = arr[:, 0].astype(np.int64)
        cols = arr[:, 1].astype(np.int64)
        weights = arr[:, 2]
        return csr_matrix(
            (np.concatenate([weights, weights]), (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
            shape=(n, n),
        )

    def induced_adjacency(self, members: np.ndarray) -> csr_matrix:
        members = np.asarray(members, dtype=np.int64)
        return self.adjacency[members][:, members]

    def ensure_connected(self) -> None:
        count, labels = connected_components(self.adjacency, directed=False)
        if count > 1:
            first = int(np.flatnonzero(labels == labels[0])[0])
            second = int(np.flatnonzero(labels != labels[0])[0])
            raise DisconnectedGraphError(first, second, int(count))

    @property
    def min_edge_weight(self) -> float:
        if not self.edges:
            return float("inf")
        return min(w for _, _, w in self.edges)

    def scaled(self, factor: float) -> "WeightedGraph":
        if factor <= 0:
            raise ParameterError(f"scale factor must be positive, got {factor}")
        return WeightedGraph(
            vertex_count=self.vertex_count,
            edges=tuple((u, v, w * factor) for u, v, w in self.edges),
            source=self.source,
        )


def rescale_to_unit_min(graph: WeightedGraph) -> tuple[WeightedGraph, float]:
    """
    Multiply every weight by (1 + 1e-6) / (minimum pairwise distance).

    With positive weights the minimum pairwise distance is the minimum edge
    weight. Returns the rescaled graph and the factor applied.
    """
    if graph.vertex_count < 2:
        return graph, 1.0
    w_min = graph.min_edge_weight
    if w_min <= 0:
        raise ParameterError("cannot rescale a graph with zero-weight edges: minimum distance is 0")
    factor = (1.0 + 1e-6) / w_min
    return graph.scaled(factor), factor
