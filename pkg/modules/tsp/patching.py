"""
modules/tsp/patching.py

Stitch open walks whose endpoints lie on an interface into one closed walk.

Multigraph on the interface: one red edge per walk (its two endpoints), the
MST of the interface, and a minimum-weight perfect matching on odd-degree
vertices. An Eulerian circuit of it, with red edges expanded back into their
walks, costs sum(walks) + w(MST) + w(matching); with an exact matching the
latter is at most w(MST).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import networkx as nx
import numpy as np

from modules.errors import InvariantViolation, ParameterError, PreconditionError
from modules.graph_core.distances import DistanceProvider
from modules.hierarchy.walks import Walk

logger = logging.getLogger(__name__)

MATCHING_STRATEGIES = ("exact", "greedy")


def _complete_graph(points: Sequence[int], dp: DistanceProvider) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(points)
    for a_idx, a in enumerate(points):
        row = dp.row(a)
        for b in points[a_idx + 1 :]:
            graph.add_edge(a, b, weight=float(row[b]))
    return graph


def mst(points: Sequence[int], dp: DistanceProvider) -> List[Tuple[int, int, float]]:
    points = sorted(int(p) for p in points)
    if len(points) < 2:
        return []
    edges = nx.minimum_spanning_edges(_complete_graph(points, dp), algorithm="kruskal", data=True)
    return [(min(a, b), max(a, b), float(data["weight"])) for a, b, data in edges]


def min_weight_matching(
    points: Sequence[int], dp: DistanceProvider, strategy: str = "exact"
) -> List[Tuple[int, int, float]]:
    if strategy not in MATCHING_STRATEGIES:
        raise ParameterError(f"unknown matching strategy '{strategy}'. Available: {list(MATCHING_STRATEGIES)}")
    points = sorted(int(p) for p in points)
    if len(points) % 2:
        raise ParameterError(f"perfect matching needs an even number of points, got {len(points)}")
    if not points:
        return []

    if strategy == "exact":
        graph = _complete_graph(points, dp)
        pairs = nx.min_weight_matching(graph)
    else:
        candidates = sorted(
            (dp.dist(a, b), a, b) for i, a in enumerate(points) for b in points[i + 1 :]
        )
        free = set(points)
        pairs = []
        for _, a, b in candidates:
            if a in free and b in free:
                pairs.append((a, b))
                free -= {a, b}
    return sorted((min(a, b), max(a, b), dp.dist(a, b)) for a, b in pairs)


@dataclass
class PatchResult:
    walk: Walk
    cost: float
    walks_weight: float
    mst_weight: float
    matching_weight: float
    exact_matching: bool

    @property
    def bound(self) -> float:
        """sum(walks) + 2 w(MST): the stitching guarantee with an exact matching."""
        return self.walks_weight + 2 * self.mst_weight

    def as_dict(self) -> dict:
        return {
            "cost": self.cost,
            "walks_weight": self.walks_weight,
            "mst_weight": self.mst_weight,
            "matching_weight": self.matching_weight,
            "bound": self.bound,
            "exact_matching": self.exact_matching,
            "within_bound": self.cost <= self.bound + 1e-9 * max(1.0, self.bound),
        }


def patch_walks(
    walks: List[Walk], interface: Sequence[int], dp: DistanceProvider, strategy: str = "exact"
) -> PatchResult:
    points = sorted({int(x) for x in interface})
    if not points:
        raise PreconditionError("cannot patch onto an empty interface")
    members = set(points)
    for idx, walk in enumerate(walks):
        if walk.vertices[0] not in members or walk.vertices[-1] not in members:
            raise PreconditionError(f"walk {idx} does not start and end on the interface")

    graph = nx.MultiGraph()
    graph.add_nodes_from(points)
    for idx, walk in enumerate(walks):
        graph.add_edge(walk.vertices[0], walk.vertices[-1], key=("red", idx))
    tree = mst(points, dp)
    for a, b, _ in tree:
        graph.add_edge(a, b, key=("mst", a, b))

    odd = [v for v in points if graph.degree(v) % 2]
    if len(odd) % 2:
        raise InvariantViolation("odd number of odd-degree interface vertices", {"odd": odd})
    matching = min_weight_matching(odd, dp, strategy)
    for a, b, _ in matching:
        graph.add_edge(a, b, key=("match", a, b))

    vertices = [points[0]]
    if graph.number_of_edges():
        for a, b, key in nx.eulerian_circuit(graph, source=points[0], keys=True):
            if key[0] == "red":
                seq = walks[key[1]].vertices
                seq = seq if seq[0] == a else seq[::-1]
                vertices.extend(seq[1:])
            else:
                vertices.append(b)

    walk = Walk(tuple(vertices))
    result = PatchResult(
        walk=walk,
        cost=walk.cost(dp),
        walks_weight=sum(w.cost(dp) for w in walks),
        mst_weight=sum(w for _, _, w in tree),
        matching_weight=sum(w for _, _, w in matching),
        exact_matching=strategy == "exact",
    )
    tol = dp.tol * max(1, len(vertices))
    if result.cost > result.walks_weight + result.mst_weight + result.matching_weight + tol:
        raise InvariantViolation("patched walk costs more than its edges", result.as_dict())
    if result.exact_matching and result.cost > result.bound + tol:
        raise InvariantViolation("patched walk exceeds sum(walks) + 2 w(MST)", result.as_dict())
    if not result.exact_matching and result.matching_weight > 2 * result.mst_weight + tol:
        logger.warning("greedy matching weight %.6g exceeds 2 w(MST) %.6g", result.matching_weight, 2 * result.mst_weight)
    return result
