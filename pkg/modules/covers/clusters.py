"""
modules/covers/clusters.py

Sparse covers and sparse partition covers at scale Delta.

sparse_cover
    r = Delta / (2 alpha), alpha = 2.8 + 6 eps. Clusters are the balls
    B(x, alpha r) around the hubs of a minimal (r, eps)-cover plus every town.
    Every B(v, beta r), beta = 0.8 + 2 eps, sits inside one cluster.

sparse_partition_cover
    r = Delta / (4 (1+eps)). Partition 0 holds the towns and one singleton per
    sprawl vertex; hub clusters C_x = B(B(x, (2+eps) r), eps r) are colored
    greedily (increasing hub id, first color with no intersecting member set)
    and each color is one more partition. Every B(v, eps r) is inside a cluster.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Union

import numpy as np

from modules.errors import ParameterError
from modules.graph_core.distances import DistanceProvider
from modules.spc.cover import ShortestPathCover, build_spc, local_sparsity, minimalize_spc
from modules.spc.towns import TownDecomposition, towns_and_sprawl

logger = logging.getLogger(__name__)


@dataclass
class Cluster:
    kind: str  # hub-ball | town | hub-cluster | singleton
    anchor: int
    members: np.ndarray
    radius: float  # every member is within this distance of the anchor


@dataclass
class SparseCover:
    delta: float
    eps: float
    r: float
    alpha: float
    beta: float
    clusters: List[Cluster]
    spc_sparsity: int
    membership: np.ndarray = field(repr=False)

    @property
    def padded_radius(self) -> float:
        return self.beta * self.r

    @property
    def max_sparsity(self) -> int:
        return int(self.membership.max()) if len(self.membership) else 0

    @property
    def histogram(self) -> list[int]:
        return np.bincount(self.membership).tolist()


@dataclass
class SparsePartitionCover:
    delta: float
    eps: float
    r: float
    clusters: List[Cluster]
    partitions: List[List[int]]
    spc_sparsity: int
    membership: np.ndarray = field(repr=False)

    @property
    def padded_radius(self) -> float:
        return self.eps * self.r

    @property
    def max_sparsity(self) -> int:
        return int(self.membership.max()) if len(self.membership) else 0

    @property
    def histogram(self) -> list[int]:
        return np.bincount(self.membership).tolist()


def count_membership(n: int, clusters: List[Cluster]) -> np.ndarray:
    counts = np.zeros(n, dtype=np.int64)
    for cluster in clusters:
        counts[cluster.members] += 1
    return counts


def _minimal_cover(dp: DistanceProvider, r: float, eps: float, builder: str) -> tuple[ShortestPathCover, TownDecomposition, int]:
    spc = minimalize_spc(dp, build_spc(dp, r, eps, builder))
    s, _ = local_sparsity(dp, spc)
    return spc, towns_and_sprawl(dp, spc), s


def _town_clusters(towns: TownDecomposition) -> list[Cluster]:
    return [Cluster("town", t.center, t.members, towns.r) for t in towns.towns]


def sparse_cover(dp: DistanceProvider, delta: float, eps: float, builder: str = "local-search") -> SparseCover:
    if not 0 < eps <= 0.1 + 1e-12:
        raise ParameterError(f"sparse cover eps must lie in (0, 1/10], got {eps}")
    if not delta > 0:
        raise ParameterError(f"Delta must be positive, got {delta}")

    alpha = 2.8 + 6 * eps
    beta = 0.8 + 2 * eps
    r = delta / (2 * alpha)
    spc, towns, s = _minimal_cover(dp, r, eps, builder)

    clusters = [
        Cluster("hub-ball", int(x), np.flatnonzero(dp.row(int(x)) <= alpha * r + dp.tol), alpha * r)
        for x in spc.hubs
    ]
    clusters.extend(_town_clusters(towns))
    membership = count_membership(dp.n, clusters)
    logger.info(
        "sparse cover Delta=%.4g: %d hub balls, %d towns, max membership %d (cover sparsity %d)",
        delta, len(spc.hubs), len(towns.towns), membership.max(), s,
    )
    return SparseCover(delta, eps, r, alpha, beta, clusters, s, membership)


def hub_cluster(dp: DistanceProvider, x: int, r: float, eps: float) -> np.ndarray:
    core = np.flatnonzero(dp.row(x) <= (2 + eps) * r + dp.tol)
    return np.flatnonzero(dp.submatrix(core).min(axis=0) <= eps * r + dp.tol)


def sparse_partition_cover(
    dp: DistanceProvider, delta: float, eps: float, builder: str = "local-search"
) -> SparsePartitionCover:
    if not 0 < eps <= 1:
        raise ParameterError(f"partition cover eps must lie in (0, 1], got {eps}")
    if not delta > 0:
        raise ParameterError(f"Delta must be positive, got {delta}")

    r = delta / (4 * (1 + eps))
    spc, towns, s = _minimal_cover(dp, r, eps, builder)

    clusters = _town_clusters(towns)
    clusters.extend(Cluster("singleton", int(v), np.asarray([v], dtype=np.int64), 0.0) for v in towns.sprawl)
    partitions: list[list[int]] = [list(range(len(clusters)))]

    colors: list[np.ndarray] = []
    for x in spc.hubs:
        members = hub_cluster(dp, int(x), r, eps)
        idx = len(clusters)
        clusters.append(Cluster("hub-cluster", int(x), members, (2 + 2 * eps) * r))
        for color, used in enumerate(colors):
            if not used[members].any():
                used[members] = True
                partitions[color + 1].append(idx)
                break
        else:
            used = np.zeros(dp.n, dtype=bool)
            used[members] = True
            colors.append(used)
            partitions.append([idx])

    membership = count_membership(dp.n, clusters)
    logger.info(
        "partition cover Delta=%.4g: %d partitions, %d clusters", delta, len(partitions), len(clusters)
    )
    return SparsePartitionCover(delta, eps, r, clusters, partitions, s, membership)


def rebuild_cover(
    n: int,
    delta: float,
    eps: float,
    clusters: List[Cluster],
    partitions: List[List[int]] | None = None,
) -> Union[SparseCover, SparsePartitionCover]:
    """Cover object for stored clusters; membership is recounted from the clusters."""
    membership = count_membership(n, clusters)
    if partitions is None:
        alpha, beta = 2.8 + 6 * eps, 0.8 + 2 * eps
        return SparseCover(delta, eps, delta / (2 * alpha), alpha, beta, clusters, 0, membership)
    for partition in partitions:
        stray = [idx for idx in partition if not 0 <= idx < len(clusters)]
        if stray:
            raise ParameterError(f"partition refers to unknown cluster {stray[0]}")
    return SparsePartitionCover(delta, eps, delta / (4 * (1 + eps)), clusters, partitions, 0, membership)
