"""
modules/synthetic/instances.py

Deterministic synthetic graphs for tests, demos and profiling runs.
Each kind has a definition with its default parameters; generate_instance
merges caller parameters over those defaults and seeds numpy from a sha256
digest of (kind, seed), so the same call always yields the same graph.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np
from scipy.sparse.csgraph import minimum_spanning_tree
from scipy.spatial.distance import cdist

from modules.errors import ParameterError
from modules.graph_core.graph import Edge, WeightedGraph

logger = logging.getLogger(__name__)

INSTANCE_KINDS: Dict[str, Dict[str, Any]] = {
    "star": {
        "defaults": {"leaves": 8, "weight": 1.0, "jitter": 0.0, "terminals": 0},
        "description": "One center joined to every leaf; highway dimension 1 at every scale.",
    },
    "grid": {
        "defaults": {"rows": 5, "cols": 5, "weight": 1.0, "jitter": 0.0, "terminals": 0},
        "description": "Rectangular grid graph; doubling, so its highway dimension is bounded.",
    },
    "duostar": {
        "defaults": {"pairs": 6, "eps": 0.1, "terminals": 0},
        "description": (
            "Center s with pairs (v_i, u_i) at weight 1, each pair joined to its own z_i at "
            "weight 1/(7+16 eps): small highway dimension as a graph, large as a metric."
        ),
    },
    "random-geometric": {
        "defaults": {"n": 40, "radius": 0.3, "complete": False, "terminals": 0},
        "description": (
            "Uniform points in the unit square with Euclidean weights; pairs within radius are "
            "joined and the Euclidean MST edges are added so the graph is connected."
        ),
    },
    "clustered-towns": {
        "defaults": {"clusters": 4, "leaves": 3, "spoke": 20.0},
        "description": (
            "Center joined by long spokes to cluster hubs, each hub carrying unit-weight leaves. "
            "Leaves are the terminals; every cluster is a town at mid scales and one ball around "
            "the center meets all of them, which forces the TSP divide step."
        ),
    },
}


@dataclass
class GeneratedInstance:
    kind: str
    seed: int
    params: Dict[str, Any]
    graph: WeightedGraph
    terminals: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))


def get_kind_definition(kind: str) -> Dict[str, Any]:
    if kind not in INSTANCE_KINDS:
        raise ParameterError(f"Unknown instance kind: '{kind}'. Available kinds: {list_kind_keys()}")
    return INSTANCE_KINDS[kind]


def list_kind_keys() -> list[str]:
    return list(INSTANCE_KINDS.keys())


def _rng(kind: str, seed: int) -> np.random.Generator:
    digest = int(hashlib.sha256(f"instance:{kind}:{seed}".encode()).hexdigest(), 16)
    return np.random.default_rng(digest % (2**63))


def _weight(rng: np.random.Generator, base: float, jitter: float) -> float:
    return base * (1.0 + jitter * rng.random()) if jitter > 0 else base


def _pick_terminals(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    if count > n:
        raise ParameterError(f"cannot pick {count} terminals from {n} vertices")
    return np.sort(rng.choice(n, size=count, replace=False)).astype(np.int64)


# ==========================================================
# GENERATORS
# ==========================================================


def _star(p: Dict[str, Any], rng: np.random.Generator) -> tuple[int, List[Edge]]:
    leaves = int(p["leaves"])
    if leaves < 1:
        raise ParameterError("a star needs at least one leaf")
    return leaves + 1, [(0, k, _weight(rng, float(p["weight"]), float(p["jitter"]))) for k in range(1, leaves + 1)]


def _grid(p: Dict[str, Any], rng: np.random.Generator) -> tuple[int, List[Edge]]:
    rows, cols = int(p["rows"]), int(p["cols"])
    if rows < 1 or cols < 1:
        raise ParameterError("grid dimensions must be positive")
    base, jitter = float(p["weight"]), float(p["jitter"])
    edges: List[Edge] = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, _weight(rng, base, jitter)))
            if r + 1 < rows:
                edges.append((v, v + cols, _weight(rng, base, jitter)))
    return rows * cols, edges


def _duostar(p: Dict[str, Any], rng: np.random.Generator) -> tuple[int, List[Edge]]:
    pairs, eps = int(p["pairs"]), float(p["eps"])
    if pairs < 1:
        raise ParameterError("a duostar needs at least one pair")
    alpha = 1.0 / (7 + 16 * eps)
    edges: List[Edge] = []
    # s = 0; pair k is (v, u, z) = (3k+1, 3k+2, 3k+3)
    for k in range(pairs):
        v, u, z = 3 * k + 1, 3 * k + 2, 3 * k + 3
        edges += [(0, v, 1.0), (0, u, 1.0), (v, z, alpha), (u, z, alpha)]
    return 3 * pairs + 1, edges


def _random_geometric(p: Dict[str, Any], rng: np.random.Generator) -> tuple[int, List[Edge]]:
    n, radius = int(p["n"]), float(p["radius"])
    if n < 1:
        raise ParameterError("random-geometric needs at least one point")
    points = rng.random((n, 2))
    dist = cdist(points, points)
    if p["complete"]:
        rows, cols = np.triu_indices(n, k=1)
    else:
        close = np.triu(dist <= radius, k=1)
        tree = minimum_spanning_tree(dist).tocoo()
        close[np.minimum(tree.row, tree.col), np.maximum(tree.row, tree.col)] = True
        rows, cols = np.nonzero(close)
    return n, [(int(a), int(b), float(dist[a, b])) for a, b in zip(rows, cols)]


def _clustered_towns(p: Dict[str, Any], rng: np.random.Generator) -> tuple[int, List[Edge], np.ndarray]:
    clusters, leaves, spoke = int(p["clusters"]), int(p["leaves"]), float(p["spoke"])
    if clusters < 2 or leaves < 1:
        raise ParameterError("clustered-towns needs at least two clusters with one leaf each")
    if spoke <= 4:
        raise ParameterError("spoke must exceed twice the cluster diameter of 2")
    edges: List[Edge] = []
    terminals: List[int] = []
    v = 1
    for _ in range(clusters):
        hub = v
        edges.append((0, hub, spoke))
        for leaf in range(hub + 1, hub + 1 + leaves):
            edges.append((hub, leaf, 1.0))
            terminals.append(leaf)
        v = hub + 1 + leaves
    return v, edges, np.asarray(terminals, dtype=np.int64)


def generate_instance(kind: str, params: Dict[str, Any] | None = None, seed: int = 0) -> GeneratedInstance:
    definition = get_kind_definition(kind)
    unknown = set(params or {}) - set(definition["defaults"])
    if unknown:
        raise ParameterError(f"unknown parameters for '{kind}': {sorted(unknown)}")
    merged = {**definition["defaults"], **(params or {})}
    rng = _rng(kind, seed)

    terminals = None
    if kind == "star":
        n, edges = _star(merged, rng)
    elif kind == "grid":
        n, edges = _grid(merged, rng)
    elif kind == "duostar":
        n, edges = _duostar(merged, rng)
    elif kind == "random-geometric":
        n, edges = _random_geometric(merged, rng)
    else:
        n, edges, terminals = _clustered_towns(merged, rng)

    if terminals is None:
        terminals = _pick_terminals(rng, n, int(merged.get("terminals", 0)))
    graph = WeightedGraph.from_edges(n, edges, format=f"synthetic:{kind}")
    logger.info("generated %s instance: n=%d m=%d terminals=%d", kind, n, graph.edge_count, len(terminals))
    return GeneratedInstance(kind=kind, seed=seed, params=merged, graph=graph, terminals=terminals)
