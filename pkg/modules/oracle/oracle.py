"""
modules/oracle/oracle.py

(1+2eps) distance oracle over a tree cover. A query takes the minimum over
trees of dist_to_root(u) + dist_to_root(v) - 2 dist_to_root(lca(u, v)); the
per-tree lookups are stacked so one query is a handful of array operations.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np

from config.settings import THREADS
from modules.treecover.builder import TreeCover
from modules.oracle.lca import LcaStructure

logger = logging.getLogger(__name__)


@dataclass
class DistanceOracle:
    eps: float
    scale: float
    leaf_count: int
    lcas: List[LcaStructure]
    tree_cover: TreeCover | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self._stack()

    def _stack(self) -> None:
        t = len(self.lcas)
        width = max((len(l.tour) for l in self.lcas), default=1)
        levels = max((l.table.shape[0] for l in self.lcas), default=1)
        self._first = np.zeros((t, self.leaf_count), dtype=np.int64)
        self._leaf_dist = np.zeros((t, self.leaf_count))
        self._depth = np.zeros((t, width), dtype=np.int64)
        self._node_dist = np.zeros((t, width))
        self._table = np.zeros((t, levels, width), dtype=np.int64)
        for idx, lca in enumerate(self.lcas):
            m = len(lca.tour)
            self._first[idx] = lca.first[: self.leaf_count]
            self._leaf_dist[idx] = lca.dist_to_root[: self.leaf_count]
            self._depth[idx, :m] = lca.tour_depth
            self._node_dist[idx, :m] = lca.dist_to_root[lca.tour]
            self._table[idx, : lca.table.shape[0], :m] = lca.table
        self._rows = np.arange(t)

    @property
    def tree_count(self) -> int:
        return len(self.lcas)

    @property
    def size_words(self) -> int:
        return sum(l.size_words for l in self.lcas)

    def query(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        a = self._first[:, u]
        b = self._first[:, v]
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        k = np.floor(np.log2(hi - lo + 1)).astype(np.int64)
        left = self._table[self._rows, k, lo]
        right = self._table[self._rows, k, hi - (1 << k) + 1]
        pick = np.where(self._depth[self._rows, left] <= self._depth[self._rows, right], left, right)
        estimates = self._leaf_dist[:, u] + self._leaf_dist[:, v] - 2 * self._node_dist[self._rows, pick]
        return float(estimates.min())

    def query_by_scan(self, u: int, v: int) -> float:
        return min(lca.distance(u, v) for lca in self.lcas)


def build_oracle(tc: TreeCover, scale: float = 1.0, threads: int = THREADS) -> DistanceOracle:
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        lcas = list(pool.map(LcaStructure.from_tree, tc.trees))
    oracle = DistanceOracle(eps=tc.eps, scale=scale, leaf_count=tc.trees[0].leaf_count, lcas=lcas, tree_cover=tc)
    logger.info("oracle built: %d trees, %d words", oracle.tree_count, oracle.size_words)
    return oracle


@dataclass
class BenchStats:
    count: int
    mean_us: float | None = None
    median_us: float | None = None
    p99_us: float | None = None
    queries_per_second: float | None = None


def query_pairs(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, n, size=(count, 2))


def bench_oracle(oracle: DistanceOracle, query_count: int, seed: int) -> BenchStats:
    if query_count <= 0:
        return BenchStats(count=0)
    pairs = query_pairs(oracle.leaf_count, query_count, seed)
    timings = np.empty(query_count)
    for idx, (u, v) in enumerate(pairs):
        start = time.perf_counter_ns()
        oracle.query(int(u), int(v))
        timings[idx] = time.perf_counter_ns() - start
    micros = timings / 1000.0
    total_seconds = timings.sum() / 1e9
    return BenchStats(
        count=query_count,
        mean_us=float(micros.mean()),
        median_us=float(np.median(micros)),
        p99_us=float(np.percentile(micros, 99)),
        queries_per_second=float(query_count / total_seconds) if total_seconds > 0 else None,
    )
