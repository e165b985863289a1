"""
modules/tsp/instance.py

Subset-TSP instance: terminals plus the hub and net hierarchies shared by all
recursive calls (the graph never changes, only the terminal set does).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from config.settings import THREADS
from modules.errors import ParameterError
from modules.graph_core.distances import DistanceProvider
from modules.graph_core.nets import NetHierarchy
from modules.hierarchy.hubs import (
    HubHierarchy,
    build_hub_hierarchy,
    check_hierarchy_inputs,
    hierarchy_local_sparsity,
    hierarchy_nets,
)
from modules.spc.towns import TownDecomposition, towns_and_sprawl
from modules.tsp.patching import MATCHING_STRATEGIES
from modules.tsp.solvers import SOLVERS

logger = logging.getLogger(__name__)

# worst case 1 + 1350 eps; run at eps / 1350 the same proof gives 1 + eps
GUARANTEE_FACTOR = 1350
DEFAULT_MIN_Q = 32


def q_shape(eps: float, sparsity: int = 1) -> int:
    """ceil(eps^-5 log^2(1/eps) s^2), floored at 32."""
    return max(DEFAULT_MIN_Q, math.ceil(eps**-5 * math.log(1 / eps) ** 2 * sparsity**2))


@dataclass
class TspInstance:
    dp: DistanceProvider
    terminals: np.ndarray
    eps: float
    q: int
    solver: str = "exact"
    matching: str = "exact"
    builder: str = "local-search"
    threads: int = THREADS
    _hierarchy: HubHierarchy | None = field(default=None, repr=False)
    _nets: NetHierarchy | None = field(default=None, repr=False)
    _towns: Dict[int, TownDecomposition] = field(default_factory=dict, repr=False)

    @property
    def guarantee(self) -> float:
        return 1 + GUARANTEE_FACTOR * self.eps

    @property
    def target(self) -> float:
        """Ratio to the optimum expected in practice: the guarantee with eps scaled down by GUARANTEE_FACTOR."""
        return 1 + self.eps

    @property
    def hierarchy_built(self) -> bool:
        return self._hierarchy is not None

    @property
    def hierarchy(self) -> HubHierarchy:
        if self._hierarchy is None:
            self._hierarchy = build_hub_hierarchy(self.dp, self.eps, self.builder, self.threads)
        return self._hierarchy

    @property
    def nets(self) -> NetHierarchy:
        if self._nets is None:
            self._nets = hierarchy_nets(self.dp, self.hierarchy)
        return self._nets

    def towns(self, level: int) -> TownDecomposition:
        cached = self._towns.get(level)
        if cached is None:
            cached = towns_and_sprawl(self.dp, self.hierarchy.level_cover(level))
            self._towns[level] = cached
        return cached


def prepare_instance(
    dp: DistanceProvider,
    terminals,
    eps: float,
    q: int | None = None,
    solver: str = "exact",
    matching: str = "exact",
    builder: str = "local-search",
    threads: int = THREADS,
) -> TspInstance:
    terminals = np.unique(np.asarray(terminals, dtype=np.int64))
    if len(terminals) == 0:
        raise ParameterError("terminal set is empty")
    if terminals[0] < 0 or terminals[-1] >= dp.n:
        raise ParameterError(f"terminal ids must lie in 0..{dp.n - 1}")
    if solver not in SOLVERS:
        raise ParameterError(f"unknown solver '{solver}'. Available: {list(SOLVERS)}")
    if matching not in MATCHING_STRATEGIES:
        raise ParameterError(f"unknown matching strategy '{matching}'. Available: {list(MATCHING_STRATEGIES)}")
    check_hierarchy_inputs(dp, eps)

    instance = TspInstance(dp, terminals, eps, q=0, solver=solver, matching=matching, builder=builder, threads=threads)
    if q is not None:
        if q < 2:
            raise ParameterError(f"q must be at least 2, got {q}")
        instance.q = int(q)
    else:
        floor_q = q_shape(eps)
        if floor_q >= len(terminals):
            instance.q = len(terminals)
        else:
            s = hierarchy_local_sparsity(dp, instance.hierarchy)
            instance.q = min(len(terminals), q_shape(eps, max(1, s)))
    logger.info("TSP instance: |K|=%d eps=%.4g q=%d", len(terminals), eps, instance.q)
    return instance
