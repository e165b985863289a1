"""
modules/treecover/verify.py

Full pair scan of a tree cover: every tree dominates d_G and the best tree
stretches each pair by at most 1 + 2 eps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra

from modules.graph_core.distances import DistanceProvider
from modules.treecover.builder import TreeCover
from modules.treecover.tree import CoverTree


@dataclass
class TreeCoverCheck:
    ok: bool
    violation: str | None = None
    pair: tuple[int, int] | None = None
    tree: int | None = None
    worst_stretch: float = 1.0
    worst_pair: tuple[int, int] | None = None

    def witness(self) -> dict:
        return {
            "violation": self.violation,
            "pair": list(self.pair) if self.pair else None,
            "tree": self.tree,
            "worst_stretch": self.worst_stretch,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
        }


def leaf_distances(tree: CoverTree) -> np.ndarray:
    """Tree distances between all leaf pairs."""
    return dijkstra(tree.as_csgraph(), directed=False, indices=np.arange(tree.leaf_count))[:, : tree.leaf_count]


def verify_tree_cover(dp: DistanceProvider, tc: TreeCover) -> TreeCoverCheck:
    D = dp.matrix()
    tol = dp.tol
    best = np.full_like(D, np.inf)
    for idx, tree in enumerate(tc.trees):
        T = leaf_distances(tree)
        short = T < D - tol
        if short.any():
            u, v = np.unravel_index(int(np.argmax(short)), short.shape)
            return TreeCoverCheck(False, "domination", (int(u), int(v)), idx)
        np.minimum(best, T, out=best)

    off = ~np.eye(dp.n, dtype=bool) & (D > 0)
    stretch = np.ones_like(D)
    stretch[off] = best[off] / D[off]
    worst = np.unravel_index(int(np.argmax(stretch)), stretch.shape)
    worst_pair = (int(worst[0]), int(worst[1]))
    worst_value = float(stretch[worst])

    over = best > (1 + 2 * tc.eps) * D + tol
    if over.any():
        u, v = np.unravel_index(int(np.argmax(over)), over.shape)
        return TreeCoverCheck(False, "stretch", (int(u), int(v)), None, worst_value, worst_pair)
    return TreeCoverCheck(True, worst_stretch=worst_value, worst_pair=worst_pair)
