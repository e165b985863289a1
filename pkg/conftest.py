"""
conftest.py

Shared fixtures and hypothesis strategies for the root-level test modules.
"""

import numpy as np
import pytest
from hypothesis import strategies as st
from scipy.sparse.csgraph import floyd_warshall

from modules.graph_core import DistanceProvider, WeightedGraph, rescale_to_unit_min
from modules.synthetic import generate_instance


# ==========================================================
# HELPERS
# ==========================================================


def provider(graph: WeightedGraph) -> DistanceProvider:
    return DistanceProvider(graph)


def brute_distances(graph: WeightedGraph) -> np.ndarray:
    """All-pairs distances by Floyd-Warshall, independent of the Dijkstra provider."""
    return floyd_warshall(graph.adjacency.toarray(), directed=False)


def clique_pair(size: int = 4, bridge: float = 10.0) -> WeightedGraph:
    """Two unit-weight cliques on 0..size-1 and size..2size-1 joined by (size-1, size)."""
    edges = []
    for offset in (0, size):
        for a in range(size):
            for b in range(a + 1, size):
                edges.append((offset + a, offset + b, 1.0))
    edges.append((size - 1, size, bridge))
    return WeightedGraph.from_edges(2 * size, edges)


def path_graph(weights) -> WeightedGraph:
    return WeightedGraph.from_edges(len(weights) + 1, [(i, i + 1, float(w)) for i, w in enumerate(weights)])


# ==========================================================
# FIXTURES
# ==========================================================


@pytest.fixture
def star():
    return generate_instance("star", {"leaves": 5}).graph


@pytest.fixture
def grid():
    return generate_instance("grid", {"rows": 4, "cols": 4}).graph


@pytest.fixture
def cliques():
    return clique_pair()


@pytest.fixture
def geometric():
    graph = generate_instance("random-geometric", {"n": 30, "radius": 0.35}, seed=7).graph
    return rescale_to_unit_min(graph)[0]


@pytest.fixture
def clustered():
    """Rescaled clustered-towns instance and its leaf terminals."""
    instance = generate_instance("clustered-towns", {"clusters": 4, "leaves": 3, "spoke": 20.0})
    graph, _ = rescale_to_unit_min(instance.graph)
    return graph, instance.terminals


# ==========================================================
# STRATEGIES
# ==========================================================


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 9, max_weight: int = 9):
    """Random spanning tree plus extra edges; integer weights in [1, max_weight]."""
    n = draw(st.integers(min_n, max_n))
    weight = st.integers(1, max_weight).map(float)
    edges = [(draw(st.integers(0, v - 1)), v, draw(weight)) for v in range(1, n)]
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    if pairs:
        extra = draw(st.lists(st.sampled_from(pairs), max_size=n, unique=True))
        edges += [(a, b, draw(weight)) for a, b in extra]
    return WeightedGraph.from_edges(n, edges)


@st.composite
def rescaled_graphs(draw, min_n: int = 3, max_n: int = 8):
    return rescale_to_unit_min(draw(connected_graphs(min_n, max_n)))[0]
