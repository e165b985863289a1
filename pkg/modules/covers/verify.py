"""
modules/covers/verify.py

Enumerative checks for sparse covers and sparse partition covers: radius-form
diameter, padding, recorded sparsity, and per-partition disjointness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Union

import numpy as np

from modules.graph_core.distances import DistanceProvider, strong_diameter
from modules.covers.clusters import SparseCover, SparsePartitionCover, count_membership


@dataclass
class CoverCheck:
    ok: bool
    violation: str | None = None
    witness: dict | None = None
    induced_over_delta: List[int] = field(default_factory=list)


def verify_cover(
    dp: DistanceProvider,
    cover: Union[SparseCover, SparsePartitionCover],
    delta: float | None = None,
    padded_radius: float | None = None,
    strict_induced: bool = False,
) -> CoverCheck:
    delta = cover.delta if delta is None else delta
    padded_radius = cover.padded_radius if padded_radius is None else padded_radius
    tol = dp.tol
    n = dp.n

    for idx, cluster in enumerate(cover.clusters):
        if len(cluster.members) == 0:
            return CoverCheck(False, "empty-cluster", {"cluster": idx})
        reach = float(dp.row(cluster.anchor)[cluster.members].max())
        if reach > cluster.radius + tol or 2 * cluster.radius > delta + tol:
            return CoverCheck(
                False, "diameter",
                {"cluster": idx, "anchor": cluster.anchor, "reach": reach, "radius": cluster.radius, "Delta": delta},
            )

    incidence = np.zeros((len(cover.clusters), n), dtype=bool)
    for idx, cluster in enumerate(cover.clusters):
        incidence[idx, cluster.members] = True
    for v in range(n):
        ball = np.flatnonzero(dp.row(v) <= padded_radius + tol)
        if not incidence[:, ball].all(axis=1).any():
            return CoverCheck(False, "padding", {"vertex": v, "radius": padded_radius})

    recount = count_membership(n, cover.clusters)
    if not np.array_equal(recount, cover.membership):
        v = int(np.flatnonzero(recount != cover.membership)[0])
        return CoverCheck(False, "sparsity", {"vertex": v, "recorded": int(cover.membership[v]), "actual": int(recount[v])})

    for p, partition in enumerate(getattr(cover, "partitions", [])):
        used = np.zeros(n, dtype=np.int64)
        for idx in partition:
            used[cover.clusters[idx].members] += 1
        if (used > 1).any():
            v = int(np.flatnonzero(used > 1)[0])
            return CoverCheck(False, "disjointness", {"partition": p, "vertex": v})

    induced = []
    if strict_induced:
        induced = [
            idx for idx, cluster in enumerate(cover.clusters)
            if strong_diameter(dp.graph, cluster.members) > delta + tol
        ]
    return CoverCheck(True, induced_over_delta=induced)
