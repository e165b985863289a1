"""
modules/treecover/tree.py

One dominating tree of a tree cover. Leaves are the graph vertices (node id
== vertex id); hub copies live after them in a flat arena.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix


@dataclass
class CoverTree:
    q: int
    j: int
    leaf_count: int
    node_vertex: np.ndarray
    node_level: np.ndarray  # -1 for leaves, k for the level-k hub copy
    parent: np.ndarray  # -1 at the root
    parent_weight: np.ndarray
    roots: np.ndarray  # component roots before joining, in chain order
    root: int = field(init=False)
    dist_to_root: np.ndarray = field(init=False, repr=False)
    depth: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.root = int(np.flatnonzero(self.parent < 0)[0])
        self.dist_to_root = np.zeros(self.node_count)
        self.depth = np.zeros(self.node_count, dtype=np.int64)
        for node in self.preorder():
            p = self.parent[node]
            if p >= 0:
                self.dist_to_root[node] = self.dist_to_root[p] + self.parent_weight[node]
                self.depth[node] = self.depth[p] + 1

    @property
    def node_count(self) -> int:
        return len(self.parent)

    def children(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.node_count)]
        for node, p in enumerate(self.parent):
            if p >= 0:
                out[p].append(node)
        return out

    def preorder(self) -> list[int]:
        kids = self.children()
        order, queue = [], deque([self.root])
        while queue:
            node = queue.popleft()
            order.append(node)
            queue.extend(kids[node])
        return order

    def lca_naive(self, u: int, v: int) -> int:
        while self.depth[u] > self.depth[v]:
            u = self.parent[u]
        while self.depth[v] > self.depth[u]:
            v = self.parent[v]
        while u != v:
            u, v = self.parent[u], self.parent[v]
        return int(u)

    def as_csgraph(self) -> csr_matrix:
        """Undirected tree over all nodes; zero-weight edges kept explicitly."""
        child = np.flatnonzero(self.parent >= 0)
        return csr_matrix(
            (self.parent_weight[child], (child, self.parent[child])),
            shape=(self.node_count, self.node_count),
        )


def tree_distance(tree: CoverTree, u: int, v: int) -> float:
    if u == v:
        return 0.0
    lca = tree.lca_naive(u, v)
    return float(tree.dist_to_root[u] + tree.dist_to_root[v] - 2 * tree.dist_to_root[lca])
