"""
modules/spc/hitting_set.py

Hitting set solvers used by the local-search SPC builder.

greedy       picks the element hitting the most unhit sets (ties: lowest id);
             within a factor (1 + ln m) of optimum.
exact-small  branch and bound over bitmasks; universe of at most 24 elements.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from modules.errors import ParameterError

logger = logging.getLogger(__name__)

EXACT_UNIVERSE_LIMIT = 24
STRATEGIES = ("greedy", "exact-small")


@dataclass
class HittingSetInstance:
    universe: np.ndarray
    incidence: np.ndarray  # sets x universe, boolean

    @classmethod
    def from_sets(cls, sets: Sequence[Sequence[int]]) -> "HittingSetInstance":
        universe = np.unique(np.concatenate([np.asarray(s, dtype=np.int64) for s in sets])) if sets else np.zeros(0, np.int64)
        incidence = np.zeros((len(sets), len(universe)), dtype=bool)
        for row, members in enumerate(sets):
            incidence[row, np.searchsorted(universe, np.asarray(members, dtype=np.int64))] = True
        return cls(universe, incidence)

    @classmethod
    def from_incidence(cls, incidence: np.ndarray) -> "HittingSetInstance":
        """Restrict a sets x vertices matrix to the vertices that appear in some set."""
        columns = np.flatnonzero(incidence.any(axis=0))
        return cls(columns.astype(np.int64), incidence[:, columns])

    @property
    def sets(self) -> List[np.ndarray]:
        return [self.universe[row] for row in self.incidence]


def solve_hitting_set(instance: HittingSetInstance, strategy: str = "greedy") -> np.ndarray:
    if strategy not in STRATEGIES:
        raise ParameterError(f"unknown hitting set strategy '{strategy}'. Available: {list(STRATEGIES)}")
    if len(instance.incidence) == 0:
        return np.zeros(0, dtype=np.int64)
    if not instance.incidence.any(axis=1).all():
        raise ParameterError("hitting set instance contains an empty set")

    if strategy == "exact-small":
        if len(instance.universe) > EXACT_UNIVERSE_LIMIT:
            raise ParameterError(
                f"exact hitting set supports at most {EXACT_UNIVERSE_LIMIT} elements, got {len(instance.universe)}"
            )
        chosen = _exact(instance.incidence)
    else:
        chosen = _greedy(instance.incidence)
    return np.sort(instance.universe[chosen])


def _greedy(incidence: np.ndarray) -> np.ndarray:
    alive = np.ones(len(incidence), dtype=bool)
    chosen: list[int] = []
    while alive.any():
        counts = incidence[alive].sum(axis=0)
        best = int(np.argmax(counts))
        chosen.append(best)
        alive &= ~incidence[:, best]
    return np.asarray(chosen, dtype=np.int64)


def _exact(incidence: np.ndarray) -> np.ndarray:
    weights = 1 << np.arange(incidence.shape[1], dtype=np.int64)
    masks = sorted({int((row * weights).sum()) for row in incidence}, key=lambda m: bin(m).count("1"))

    greedy = _greedy(incidence)
    best = {"size": len(greedy), "bits": sum(1 << int(c) for c in greedy)}

    def search(bits: int, size: int) -> None:
        unhit = next((m for m in masks if not m & bits), None)
        if unhit is None:
            if size < best["size"]:
                best["size"], best["bits"] = size, bits
            return
        if size + 1 >= best["size"]:
            return
        element = unhit
        while element:
            low = element & -element
            search(bits | low, size + 1)
            element ^= low

    search(0, 0)
    bits = best["bits"]
    return np.asarray([i for i in range(incidence.shape[1]) if bits >> i & 1], dtype=np.int64)
