"""
modules/oracle/lca.py

Constant-time lowest common ancestors: Euler tour plus a sparse table of
range-minimum positions over tour depths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from modules.errors import InvariantViolation
from modules.treecover.tree import CoverTree


@dataclass
class LcaStructure:
    tour: np.ndarray
    tour_depth: np.ndarray
    first: np.ndarray
    table: np.ndarray  # levels x len(tour); row k holds argmin positions for windows of 2^k
    dist_to_root: np.ndarray

    @classmethod
    def from_tree(cls, tree: CoverTree) -> "LcaStructure":
        if int((tree.parent < 0).sum()) != 1:
            raise InvariantViolation("tree cover tree is disconnected", {"q": tree.q, "j": tree.j})
        tour = euler_tour(tree)
        depth = tree.depth[tour]
        _, first = np.unique(tour, return_index=True)
        return cls(tour, depth, first.astype(np.int64), sparse_table(depth), tree.dist_to_root)

    @property
    def size_words(self) -> int:
        return int(self.tour.size + self.tour_depth.size + self.first.size + self.table.size + self.dist_to_root.size)

    def lca(self, u: int, v: int) -> int:
        lo, hi = sorted((int(self.first[u]), int(self.first[v])))
        k = (hi - lo + 1).bit_length() - 1
        a = self.table[k, lo]
        b = self.table[k, hi - (1 << k) + 1]
        return int(self.tour[a if self.tour_depth[a] <= self.tour_depth[b] else b])

    def distance(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        return float(self.dist_to_root[u] + self.dist_to_root[v] - 2 * self.dist_to_root[self.lca(u, v)])


def euler_tour(tree: CoverTree) -> np.ndarray:
    kids = tree.children()
    tour = [tree.root]
    stack = [(tree.root, iter(kids[tree.root]))]
    while stack:
        node, remaining = stack[-1]
        child = next(remaining, None)
        if child is None:
            stack.pop()
            if stack:
                tour.append(stack[-1][0])
            continue
        tour.append(child)
        stack.append((child, iter(kids[child])))
    return np.asarray(tour, dtype=np.int64)


def sparse_table(values: np.ndarray) -> np.ndarray:
    """Row k, column i: position of the minimum of values[i : i + 2^k] (clipped at the end)."""
    m = len(values)
    levels = max(1, m.bit_length())
    table = np.empty((levels, m), dtype=np.int64)
    table[0] = np.arange(m)
    for k in range(1, levels):
        half = 1 << (k - 1)
        prev = table[k - 1]
        right = np.concatenate([prev[half:], prev[-1:].repeat(min(half, m))])[:m]
        table[k] = np.where(values[prev] <= values[right], prev, right)
    return table
