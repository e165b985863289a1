"""
modules/graph_core/distances.py

Shortest-path distances, balls and diameters.

DistanceProvider holds either the full all-pairs matrix (n <= APSP_CAP) or a
memo of single-source rows. Both are read-only once produced; row insertion in
memo mode is serialized by a lock.
"""

from __future__ import annotations

import logging
import threading
from functools import cached_property

import numpy as np
from scipy.sparse.csgraph import dijkstra

from config.settings import APSP_CAP, RELATIVE_TOLERANCE
from modules.errors import ParameterError, PreconditionError
from modules.graph_core.graph import WeightedGraph

logger = logging.getLogger(__name__)


def single_source_distances(graph: WeightedGraph, src: int) -> np.ndarray:
    """Exact shortest-path distances from src, indexed by vertex id."""
    if not 0 <= src < graph.vertex_count:
        raise PreconditionError(f"source vertex {src} outside 0..{graph.vertex_count - 1}")
    return dijkstra(graph.adjacency, directed=False, indices=src)


class DistanceProvider:
    def __init__(self, graph: WeightedGraph, apsp_cap: int = APSP_CAP):
        self.graph = graph
        self._lock = threading.Lock()
        self._rows: dict[int, np.ndarray] = {}
        self._matrix: np.ndarray | None = None
        if graph.vertex_count <= apsp_cap:
            matrix = dijkstra(graph.adjacency, directed=False)
            matrix.setflags(write=False)
            self._matrix = matrix
        else:
            logger.warning(
                "n=%d exceeds APSP cap %d; distances are memoized per source",
                graph.vertex_count,
                apsp_cap,
            )

    @property
    def n(self) -> int:
        return self.graph.vertex_count

    @property
    def cached(self) -> bool:
        return self._matrix is not None

    def row(self, v: int) -> np.ndarray:
        if self._matrix is not None:
            return self._matrix[v]
        row = self._rows.get(v)
        if row is None:
            row = single_source_distances(self.graph, v)
            row.setflags(write=False)
            with self._lock:
                row = self._rows.setdefault(v, row)
        return row

    def dist(self, u: int, v: int) -> float:
        return float(self.row(u)[v])

    def submatrix(self, rows: np.ndarray, cols: np.ndarray | None = None) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        if self._matrix is not None:
            block = self._matrix[rows]
        else:
            block = np.vstack([self.row(int(v)) for v in rows]) if len(rows) else np.zeros((0, self.n))
        if cols is not None:
            block = block[:, np.asarray(cols, dtype=np.int64)]
        return block

    def matrix(self) -> np.ndarray:
        """Full all-pairs matrix; in memo mode every row is computed."""
        if self._matrix is None:
            logger.warning("materializing all %d distance rows in memo mode", self.n)
            return self.submatrix(np.arange(self.n))
        return self._matrix

    @cached_property
    def diameter(self) -> float:
        if self._matrix is not None:
            return float(self._matrix.max())
        return float(max(self.row(v).max() for v in range(self.n)))

    @cached_property
    def min_distance(self) -> float:
        """Minimum distance between distinct vertices (inf for one vertex)."""
        if self.n < 2:
            return float("inf")
        return self.graph.min_edge_weight

    @cached_property
    def tol(self) -> float:
        return RELATIVE_TOLERANCE * max(1.0, self.diameter)


def ball(dp: DistanceProvider, v: int, r: float) -> np.ndarray:
    """Closed ball B(v, r) as a VertexSet."""
    if r < 0:
        raise PreconditionError(f"ball radius must be non-negative, got {r}")
    return np.flatnonzero(dp.row(v) <= r + dp.tol)


def _check_members(graph: WeightedGraph, members: np.ndarray) -> np.ndarray:
    members = np.unique(np.asarray(members, dtype=np.int64))
    if len(members) and (members[0] < 0 or members[-1] >= graph.vertex_count):
        raise PreconditionError("vertex set contains ids outside the graph")
    return members


def induced_distance(graph: WeightedGraph, members: np.ndarray, u: int, v: int) -> float:
    """Shortest-path distance inside G[members]; inf when disconnected there."""
    members = _check_members(graph, members)
    pos_u = np.searchsorted(members, u)
    pos_v = np.searchsorted(members, v)
    if pos_u >= len(members) or members[pos_u] != u or pos_v >= len(members) or members[pos_v] != v:
        raise PreconditionError(f"vertices {u} and {v} must both belong to the induced set")
    row = dijkstra(graph.induced_adjacency(members), directed=False, indices=int(pos_u))
    return float(row[pos_v])


def induced_distances_from(graph: WeightedGraph, members: np.ndarray, source: int) -> np.ndarray:
    """Distances from source to every member inside G[members], aligned with members."""
    members = _check_members(graph, members)
    pos = int(np.searchsorted(members, source))
    if pos >= len(members) or members[pos] != source:
        raise PreconditionError(f"source {source} must belong to the induced set")
    return dijkstra(graph.induced_adjacency(members), directed=False, indices=pos)


def strong_diameter(graph: WeightedGraph, members: np.ndarray) -> float:
    members = _check_members(graph, members)
    if len(members) == 0:
        raise PreconditionError("strong diameter of an empty set is undefined")
    if len(members) == 1:
        return 0.0
    return float(dijkstra(graph.induced_adjacency(members), directed=False).max())


def weak_diameter(dp: DistanceProvider, members: np.ndarray) -> float:
    members = np.asarray(members, dtype=np.int64)
    if len(members) == 0:
        raise PreconditionError("weak diameter of an empty set is undefined")
    return float(dp.submatrix(members, members).max())


def aspect_ratio(dp: DistanceProvider) -> float:
    if dp.n < 2:
        raise ParameterError("aspect ratio needs at least two vertices")
    if dp.min_distance <= 0:
        return float("inf")
    return dp.diameter / dp.min_distance
