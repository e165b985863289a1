"""
modules/decomp/padded.py

Strong padded decompositions by clustering with shifted starting times.

Centers are the hubs of a minimal (r, eps)-cover plus one center per town,
with r = Delta / (6 (1+eps)). Each center x draws a shift delta_x from a
truncated exponential (hubs on [1/2+2eps, 1+2eps] r, town centers on
[0, 1/2] r) and every vertex v joins the center maximizing delta_x - d(x, v),
ties to the lowest center index (hubs first, then town centers, each by id).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np

from modules.errors import InvariantViolation, ParameterError
from modules.graph_core.distances import DistanceProvider, induced_distances_from, strong_diameter
from modules.graph_core.graph import WeightedGraph
from modules.spc.cover import ShortestPathCover, build_spc, local_sparsity, minimalize_spc
from modules.spc.towns import TownDecomposition, towns_and_sprawl
from modules.decomp.texp import center_stream, sample_texp

logger = logging.getLogger(__name__)

MAX_EPS = 0.25
TOWN_SHIFT = (0.0, 0.5)


def hub_shift_interval(eps: float) -> tuple[float, float]:
    return 0.5 + 2 * eps, 1.0 + 2 * eps


def nearby_radius(r: float, eps: float) -> float:
    """Radius of the ball whose center count bounds lambda."""
    return (2.8 + 6 * eps) * r


def lambda_for_sparsity(s: int) -> float:
    return 4 * (math.log(2 * s * s + 1) + 1)


# =====================================================================
# Centers
# =====================================================================

@dataclass
class CenterSet:
    delta: float
    eps: float
    r: float
    spc: ShortestPathCover
    towns: TownDecomposition
    centers: np.ndarray
    kinds: List[str]
    intervals: np.ndarray  # normalized by r, one row per center
    lam: float
    sparsity: int
    max_nearby_centers: int


def prepare_centers(
    dp: DistanceProvider,
    delta: float,
    eps: float,
    lam: float | None = None,
    builder: str = "local-search",
) -> CenterSet:
    if not 0 <= eps <= MAX_EPS:
        raise ParameterError(f"decomposition eps must lie in [0, 1/4], got {eps}")
    if not delta > 0:
        raise ParameterError(f"Delta must be positive, got {delta}")

    r = delta / (6 * (1 + eps))
    spc = minimalize_spc(dp, build_spc(dp, r, eps, builder))
    towns = towns_and_sprawl(dp, spc)
    town_centers = np.asarray([t.center for t in towns.towns], dtype=np.int64)
    centers = np.concatenate([spc.hubs, town_centers])
    kinds = ["hub"] * len(spc.hubs) + ["town"] * len(town_centers)
    intervals = np.asarray(
        [hub_shift_interval(eps)] * len(spc.hubs) + [TOWN_SHIFT] * len(town_centers),
        dtype=np.float64,
    ).reshape(-1, 2)

    s, _ = local_sparsity(dp, spc)
    nearby = (dp.submatrix(np.arange(dp.n), centers) <= nearby_radius(r, eps) + dp.tol).sum(axis=1)
    max_nearby = int(nearby.max()) if len(nearby) else 0

    if lam is None:
        lam = lambda_for_sparsity(s)
        needed = 4 * (math.log(max(1, max_nearby)) + 1)
        if needed > lam:
            logger.warning("raising lambda from %.4g to %.4g: %d centers near one vertex", lam, needed, max_nearby)
            lam = needed
    elif lam <= 0:
        raise ParameterError(f"lambda must be positive, got {lam}")

    logger.info(
        "decomposition centers Delta=%.4g eps=%.4g: %d hubs, %d towns, lambda=%.4g",
        delta, eps, len(spc.hubs), len(town_centers), lam,
    )
    return CenterSet(delta, eps, r, spc, towns, centers, kinds, intervals, float(lam), s, max_nearby)


# =====================================================================
# Sampling
# =====================================================================

@dataclass
class PaddedPartition:
    delta: float
    eps: float
    r: float
    lam: float
    seed: int
    trial: int
    centers: np.ndarray
    kinds: List[str]
    intervals: np.ndarray
    shifts: np.ndarray
    assignment: np.ndarray  # vertex -> index into centers
    clusters: List[tuple[int, np.ndarray]]  # (center index, members), nonempty only

    def cluster_of(self, v: int) -> int:
        return int(self.centers[self.assignment[v]])


def sample_shifts(cs: CenterSet, seed: int, trial: int) -> np.ndarray:
    shifts = np.empty(len(cs.centers), dtype=np.float64)
    for idx, (center, (lo, hi)) in enumerate(zip(cs.centers, cs.intervals)):
        shifts[idx] = cs.r * sample_texp(cs.lam, lo, hi, center_stream(seed, trial, int(center)))
    return shifts


def assign(dp: DistanceProvider, centers: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    scores = shifts[:, None] - dp.submatrix(centers)
    return np.argmax(scores, axis=0)


def sample_partition(dp: DistanceProvider, cs: CenterSet, seed: int, trial: int = 0) -> PaddedPartition:
    shifts = sample_shifts(cs, seed, trial)
    assignment = assign(dp, cs.centers, shifts)
    clusters = [
        (int(idx), np.flatnonzero(assignment == idx)) for idx in np.unique(assignment)
    ]
    partition = PaddedPartition(
        delta=cs.delta, eps=cs.eps, r=cs.r, lam=cs.lam, seed=seed, trial=trial,
        centers=cs.centers, kinds=cs.kinds, intervals=cs.intervals,
        shifts=shifts, assignment=assignment, clusters=clusters,
    )
    _assert_clusters(dp, cs, partition)
    return partition


def _assert_clusters(dp: DistanceProvider, cs: CenterSet, partition: PaddedPartition) -> None:
    tol = dp.tol
    for idx, members in partition.clusters:
        center = int(cs.centers[idx])
        if cs.kinds[idx] == "town":
            town = cs.towns.town_containing(center)
            stray = np.setdiff1d(members, town.members)
            if len(stray):
                raise InvariantViolation(
                    f"vertex {stray[0]} joined town center {center} from outside its town",
                    {"center": center, "vertex": int(stray[0])},
                )
        radius = induced_distances_from(dp.graph, members, center)
        if not radius.max() <= partition.delta / 2 + tol:
            raise InvariantViolation(
                f"cluster of {center} reaches {radius.max():.6g} > Delta/2 inside the cluster",
                {"center": center, "radius": float(radius.max()), "Delta": partition.delta},
            )


def padded_decomposition(
    dp: DistanceProvider,
    delta: float,
    eps: float,
    seed: int,
    trial: int = 0,
    lam: float | None = None,
) -> PaddedPartition:
    return sample_partition(dp, prepare_centers(dp, delta, eps, lam), seed, trial)


# =====================================================================
# Verification
# =====================================================================

@dataclass
class PartitionCheck:
    ok: bool
    violation: str | None = None
    witness: dict | None = None


def verify_partition(graph: WeightedGraph, dp: DistanceProvider, partition: PaddedPartition) -> PartitionCheck:
    n = dp.n
    tol = dp.tol

    seen = np.zeros(n, dtype=np.int64)
    for idx, members in partition.clusters:
        seen[members] += 1
        mismatched = members[partition.assignment[members] != idx]
        if len(mismatched):
            return PartitionCheck(False, "assignment", {"vertex": int(mismatched[0]), "cluster": int(partition.centers[idx])})
    if (seen != 1).any():
        v = int(np.flatnonzero(seen != 1)[0])
        return PartitionCheck(False, "coverage", {"vertex": v, "times_covered": int(seen[v])})

    for idx, (lo, hi) in enumerate(partition.intervals):
        shift = partition.shifts[idx] / partition.r
        if not lo - 1e-12 <= shift <= hi + 1e-12:
            return PartitionCheck(False, "shift", {"center": int(partition.centers[idx]), "shift": float(partition.shifts[idx])})

    for idx, members in partition.clusters:
        diameter = strong_diameter(graph, members)
        if not diameter <= partition.delta + tol:
            return PartitionCheck(False, "diameter", {"center": int(partition.centers[idx]), "strong_diameter": diameter})

    scores = partition.shifts[:, None] - dp.submatrix(partition.centers)
    best = np.argmax(scores, axis=0)
    wrong = np.flatnonzero(best != partition.assignment)
    if len(wrong):
        v = int(wrong[0])
        return PartitionCheck(False, "argmax", {"vertex": v, "expected": int(partition.centers[best[v]])})

    if len(partition.centers) > 1:
        top_two = -np.partition(-scores, 1, axis=0)[:2]
        gaps = top_two[0] - top_two[1]
        D = dp.matrix()
        for v in range(n):
            near = D[v] < gaps[v] / 2 - tol
            if (partition.assignment[near] != partition.assignment[v]).any():
                u = int(np.flatnonzero(near & (partition.assignment != partition.assignment[v]))[0])
                return PartitionCheck(False, "pad-property", {"vertex": v, "neighbor": u, "gap": float(gaps[v])})

    return PartitionCheck(True)


def rebuild_partition(
    n: int,
    delta: float,
    eps: float,
    lam: float,
    seed: int,
    trial: int,
    clusters: List[tuple[int, str, float, np.ndarray]],
) -> PaddedPartition:
    """
    Partition object for stored (center, kind, shift, members) clusters.
    Vertices claimed by no cluster keep assignment -1 and vertices claimed
    twice keep the later cluster; verify_partition reports both.
    """
    centers = np.asarray([c for c, _, _, _ in clusters], dtype=np.int64)
    kinds = [k for _, k, _, _ in clusters]
    unknown = [k for k in kinds if k not in ("hub", "town")]
    if unknown:
        raise ParameterError(f"unknown cluster kind '{unknown[0]}'")
    intervals = np.asarray(
        [hub_shift_interval(eps) if k == "hub" else TOWN_SHIFT for k in kinds], dtype=np.float64
    ).reshape(-1, 2)
    shifts = np.asarray([s for _, _, s, _ in clusters], dtype=np.float64)
    assignment = np.full(n, -1, dtype=np.int64)
    members = []
    for idx, (_, _, _, m) in enumerate(clusters):
        m = np.asarray(m, dtype=np.int64)
        if len(m) and (m.min() < 0 or m.max() >= n):
            raise ParameterError(f"cluster {idx} names a vertex outside 0..{n - 1}")
        assignment[m] = idx
        members.append((idx, m))
    return PaddedPartition(
        delta=delta, eps=eps, r=delta / (6 * (1 + eps)), lam=lam, seed=seed, trial=trial,
        centers=centers, kinds=kinds, intervals=intervals,
        shifts=shifts, assignment=assignment, clusters=members,
    )
