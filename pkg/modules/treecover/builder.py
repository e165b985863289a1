"""
modules/treecover/builder.py

(1+2eps)-stretch tree cover for graphs of low highway dimension.

Scales r_i = (1+delta)^i with delta = eps/3. Each level's cover SPC_i is split
greedily into groups whose hubs are pairwise farther than (2+4eps) r_i. Tree
T_{q,j} uses levels q(k) = q + kK, K = ceil(log_{1+delta}(32/eps)): at every
such level each current representative v' attaches to the unique hub x of
group j with d(v, x) <= (1+2eps) r_{q(k)}, through a copy x_k of x. Leftover
roots are chained with edges of weight equal to the graph diameter.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List

import numpy as np

from config.settings import THREADS
from modules.errors import InvariantViolation, ParameterError
from modules.graph_core.distances import DistanceProvider
from modules.spc.cover import ShortestPathCover, build_spc
from modules.treecover.tree import CoverTree

logger = logging.getLogger(__name__)


@dataclass
class TreeCover:
    eps: float
    delta: float
    K: int
    radii: List[float]
    spcs: List[ShortestPathCover]
    groups: List[List[np.ndarray]]
    trees: List[CoverTree]
    diameter: float

    @property
    def s_max(self) -> int:
        return max([1] + [len(g) for g in self.groups])

    @property
    def tree_count(self) -> int:
        return len(self.trees)


def partition_spc_groups(dp: DistanceProvider, hubs: np.ndarray, r: float, eps: float) -> List[np.ndarray]:
    limit = (2 + 4 * eps) * r + dp.tol
    groups: list[list[int]] = []
    for x in np.sort(np.asarray(hubs, dtype=np.int64)):
        row = dp.row(int(x))
        for group in groups:
            if (row[group] > limit).all():
                group.append(int(x))
                break
        else:
            groups.append([int(x)])
    return [np.asarray(g, dtype=np.int64) for g in groups]


def build_cover_tree(
    dp: DistanceProvider,
    q: int,
    j: int,
    K: int,
    radii: List[float],
    groups: List[List[np.ndarray]],
    eps: float,
    diameter: float,
) -> CoverTree:
    n = dp.n
    tol = dp.tol
    node_vertex = list(range(n))
    node_level = [-1] * n
    parent = [-1] * n
    weight = [0.0] * n
    rep = np.arange(n)
    leaf_to_rep = np.zeros(n)

    k = 0
    while q + k * K < len(radii):
        level = q + k * K
        r = radii[level]
        hubs = groups[level][j] if j < len(groups[level]) else np.zeros(0, dtype=np.int64)
        if len(hubs):
            copies: dict[int, int] = {}
            threshold = (1 + 2 * eps) * r + tol
            for node in np.unique(rep):
                u = node_vertex[node]
                distances = dp.row(u)[hubs]
                near = hubs[distances <= threshold]
                if len(near) > 1:
                    raise InvariantViolation(
                        f"representative of {u} has {len(near)} qualifying hubs in group {j} at level {level}",
                        {"vertex": int(u), "hubs": near.tolist(), "level": level},
                    )
                if len(near) == 0:
                    continue
                x = int(near[0])
                if x not in copies:
                    copies[x] = len(node_vertex)
                    node_vertex.append(x)
                    node_level.append(k)
                    parent.append(-1)
                    weight.append(0.0)
                w = float(dp.row(u)[x])
                parent[node] = copies[x]
                weight[node] = w
                moved = rep == node
                leaf_to_rep[moved] += w
                rep[moved] = copies[x]

        bound = 4 * r + tol
        if (leaf_to_rep > bound).any():
            leaf = int(np.argmax(leaf_to_rep))
            raise InvariantViolation(
                f"leaf {leaf} is {leaf_to_rep[leaf]:.6g} from its level-{k} representative (> 4 r)",
                {"leaf": leaf, "level": level, "distance": float(leaf_to_rep[leaf])},
            )
        k += 1

    roots = np.unique(rep)
    for previous, current in zip(roots[:-1], roots[1:]):
        parent[current] = int(previous)
        weight[current] = diameter

    return CoverTree(
        q=q,
        j=j,
        leaf_count=n,
        node_vertex=np.asarray(node_vertex, dtype=np.int64),
        node_level=np.asarray(node_level, dtype=np.int64),
        parent=np.asarray(parent, dtype=np.int64),
        parent_weight=np.asarray(weight, dtype=np.float64),
        roots=roots.astype(np.int64),
    )


def tree_cover_levels(dp: DistanceProvider, eps: float) -> tuple[float, List[float], int]:
    delta = eps / 3
    diameter = dp.diameter
    top = int(math.floor(math.log(diameter) / math.log(1 + delta))) if diameter > 1 else 0
    K = int(math.ceil(math.log(32 / eps) / math.log(1 + delta)))
    return delta, [(1 + delta) ** i for i in range(top + 1)], K


def build_tree_cover(
    dp: DistanceProvider,
    eps: float,
    builder: str = "local-search",
    threads: int = THREADS,
) -> TreeCover:
    if not 0 < eps <= 1:
        raise ParameterError(f"tree cover eps must lie in (0, 1], got {eps}")
    if dp.n > 1 and not dp.min_distance > 1:
        raise ParameterError(f"minimum distance {dp.min_distance:.6g} must exceed 1; rescale the graph first")

    delta, radii, K = tree_cover_levels(dp, eps)
    workers = max(1, threads)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        spcs = list(pool.map(lambda r: build_spc(dp, r, eps, builder), radii))
    groups = [partition_spc_groups(dp, spc.hubs, spc.r, eps) for spc in spcs]
    s_max = max([1] + [len(g) for g in groups])
    logger.info(
        "tree cover eps=%.4g: %d levels, K=%d, s_max=%d -> %d trees", eps, len(radii), K, s_max, K * s_max
    )

    diameter = dp.diameter
    with ThreadPoolExecutor(max_workers=workers) as pool:
        trees = list(
            pool.map(
                lambda qj: build_cover_tree(dp, qj[0], qj[1], K, radii, groups, eps, diameter),
                itertools.product(range(K), range(s_max)),
            )
        )
    return TreeCover(eps, delta, K, radii, spcs, groups, trees, diameter)
