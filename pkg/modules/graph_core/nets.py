"""
modules/graph_core/nets.py

Net hierarchies from a Gonzales (farthest-point) order.

Every prefix of a Gonzales order is a packing at its last insertion radius and
a covering at the next one, so level i is the shortest prefix whose covering
radius is at most base * ratio**i. Levels are nested because they are prefixes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from modules.errors import ParameterError
from modules.graph_core.distances import DistanceProvider


def gonzales_order(dp: DistanceProvider, start: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """
    Farthest-point order from start, ties to the lowest vertex id.

    Returns (order, insertion_radii); insertion_radii[0] is inf and
    insertion_radii[k] is the distance of order[k] to order[:k].
    """
    n = dp.n
    order = np.empty(n, dtype=np.int64)
    radii = np.empty(n, dtype=np.float64)
    order[0] = start
    radii[0] = np.inf
    nearest = np.array(dp.row(start), dtype=np.float64)
    for k in range(1, n):
        nxt = int(np.argmax(nearest))
        order[k] = nxt
        radii[k] = nearest[nxt]
        np.minimum(nearest, dp.row(nxt), out=nearest)
    return order, radii


@dataclass
class NetHierarchy:
    base_radius: float
    ratio: float
    gonzales_order: np.ndarray
    insertion_radii: np.ndarray
    tol: float = 0.0
    rank: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.rank = np.empty(len(self.gonzales_order), dtype=np.int64)
        self.rank[self.gonzales_order] = np.arange(len(self.gonzales_order))
        self._level_cache: dict[int, np.ndarray] = {}

    def radius(self, i: int) -> float:
        return self.base_radius * self.ratio**i

    def size(self, i: int) -> int:
        delta = self.radius(i)
        return 1 + int(np.count_nonzero(self.insertion_radii[1:] > delta + self.tol))

    def level(self, i: int) -> np.ndarray:
        cached = self._level_cache.get(i)
        if cached is None:
            cached = np.sort(self.gonzales_order[: self.size(i)])
            self._level_cache[i] = cached
        return cached

    def contains(self, i: int, v: int) -> bool:
        return bool(self.rank[v] < self.size(i))

    def nearest(self, dp: DistanceProvider, i: int, u: int) -> int:
        """Nearest level-i net point to u, ties to the lowest id."""
        members = self.level(i)
        return int(members[int(np.argmin(dp.row(u)[members]))])

    @property
    def top_level(self) -> int:
        """First level consisting of a single vertex."""
        if len(self.gonzales_order) == 1 or not np.isfinite(self.insertion_radii[1]):
            return 0
        needed = self.insertion_radii[1] / self.base_radius
        if needed <= 1:
            return 0
        return max(0, math.ceil(math.log(needed) / math.log(self.ratio)))

    @property
    def levels(self) -> list[np.ndarray]:
        return [self.level(i) for i in range(self.top_level + 1)]


def gonzales_net_hierarchy(dp: DistanceProvider, base: float, ratio: float) -> NetHierarchy:
    if ratio <= 1:
        raise ParameterError(f"net ratio must exceed 1, got {ratio}")
    if base <= 0:
        raise ParameterError(f"net base radius must be positive, got {base}")
    order, radii = _cached_order(dp)
    return NetHierarchy(base, ratio, order, radii, tol=dp.tol)


def _cached_order(dp: DistanceProvider) -> tuple[np.ndarray, np.ndarray]:
    cached = getattr(dp, "_gonzales", None)
    if cached is None:
        cached = gonzales_order(dp)
        dp._gonzales = cached
    return cached
