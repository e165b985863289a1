"""
modules/tsp/solvers.py

Metric tour solvers over a small distance table.

held_karp               exact subset dynamic program (at most 18 points),
                        vectorized by subset size.
nearest_neighbor_2opt   heuristic for anything larger; never worse than the
                        doubled minimum spanning tree.

Orders are cyclic permutations of range(m) starting at 0.
"""

from __future__ import annotations

import logging
from typing import List, Tuple

import numpy as np
from scipy.sparse.csgraph import depth_first_order, minimum_spanning_tree

from modules.errors import ParameterError
from modules.graph_core.distances import DistanceProvider
from modules.hierarchy.walks import Walk

logger = logging.getLogger(__name__)

HELD_KARP_LIMIT = 18
BRUTE_FORCE_LIMIT = 11
SOLVERS = ("exact", "heuristic")


def tour_cost(table: np.ndarray, order: List[int]) -> float:
    if len(order) < 2:
        return 0.0
    idx = np.asarray(order, dtype=np.int64)
    return float(table[idx, np.roll(idx, -1)].sum())


def held_karp(table: np.ndarray) -> Tuple[List[int], float]:
    m = len(table)
    if m > HELD_KARP_LIMIT:
        raise ParameterError(f"Held-Karp supports at most {HELD_KARP_LIMIT} points, got {m}")
    if m <= 2:
        order = list(range(m))
        return order, tour_cost(table, order)

    k = m - 1
    full = 1 << k
    masks = np.arange(full, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(k)) & 1
    size = bits.sum(axis=1)
    step = table[1:, 1:]

    cost = np.full((full, k), np.inf)
    parent = np.full((full, k), -1, dtype=np.int64)
    singles = 1 << np.arange(k)
    cost[singles, np.arange(k)] = table[0, 1:]

    for layer_size in range(2, k + 1):
        layer = masks[size == layer_size]
        for j in range(k):
            chosen = layer[bits[layer, j] == 1]
            previous = chosen ^ (1 << j)
            candidates = cost[previous] + step[:, j][None, :]
            best = np.argmin(candidates, axis=1)
            cost[chosen, j] = candidates[np.arange(len(chosen)), best]
            parent[chosen, j] = best

    closing = cost[full - 1] + table[1:, 0]
    last = int(np.argmin(closing))
    path = []
    mask, j = full - 1, last
    while j >= 0:
        path.append(j + 1)
        previous = int(parent[mask, j])
        mask ^= 1 << j
        j = previous if mask else -1
    order = [0] + path[::-1]
    return order, float(closing[last])


def _mst_preorder(table: np.ndarray) -> List[int]:
    """Preorder of a minimum spanning tree from point 0 (the doubled-tree tour)."""
    # a constant shift keeps the tree and keeps zero distances as edges
    shifted = table + 1.0
    np.fill_diagonal(shifted, 0.0)
    tree = minimum_spanning_tree(shifted)
    order = depth_first_order(tree, 0, directed=False, return_predecessors=False)
    return [int(v) for v in order]


def nearest_neighbor_2opt(table: np.ndarray) -> Tuple[List[int], float]:
    """2-opt from the cheaper of the nearest-neighbor tour and the MST preorder tour."""
    m = len(table)
    if m <= 3:
        order = list(range(m))
        return order, tour_cost(table, order)

    unvisited = set(range(1, m))
    greedy = [0]
    while unvisited:
        here = greedy[-1]
        nxt = min(unvisited, key=lambda c: (table[here, c], c))
        greedy.append(nxt)
        unvisited.remove(nxt)
    order = min((greedy, _mst_preorder(table)), key=lambda o: tour_cost(table, o))

    improved = True
    while improved:
        improved = False
        for a in range(1, m - 1):
            for b in range(a + 1, m):
                i, j = order[a - 1], order[a]
                k, l = order[b], order[(b + 1) % m]
                delta = table[i, k] + table[j, l] - table[i, j] - table[k, l]
                if delta < -1e-12:
                    order[a : b + 1] = order[a : b + 1][::-1]
                    improved = True
    return order, tour_cost(table, order)


def solve_metric_tour(table: np.ndarray, solver: str = "exact") -> Tuple[List[int], float, bool]:
    """Returns (order, cost, exact)."""
    if solver not in SOLVERS:
        raise ParameterError(f"unknown solver '{solver}'. Available: {list(SOLVERS)}")
    if solver == "exact" and len(table) <= HELD_KARP_LIMIT:
        order, cost = held_karp(table)
        return order, cost, True
    if solver == "exact":
        logger.warning("%d points exceed the exact solver limit; using nearest neighbor + 2-opt", len(table))
    order, cost = nearest_neighbor_2opt(table)
    return order, cost, False


def closed_walk(vertices: np.ndarray, order: List[int]) -> Walk:
    seq = [int(vertices[o]) for o in order]
    return Walk.of(seq + [seq[0]] if len(seq) > 1 else seq)


def tsp_brute_force(dp: DistanceProvider, terminals: np.ndarray) -> Tuple[Walk, float]:
    """Optimal closed walk over the terminals (shortcutting reduces it to metric TSP)."""
    terminals = np.unique(np.asarray(terminals, dtype=np.int64))
    if len(terminals) == 0:
        raise ParameterError("terminal set is empty")
    if len(terminals) > BRUTE_FORCE_LIMIT:
        raise ParameterError(f"brute force refuses more than {BRUTE_FORCE_LIMIT} terminals, got {len(terminals)}")
    order, cost = held_karp(dp.submatrix(terminals, terminals))
    return closed_walk(terminals, order), cost
