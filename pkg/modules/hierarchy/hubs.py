"""
modules/hierarchy/hubs.py

Nested hub hierarchy H_0 ⊇ H_1 ⊇ ... ⊇ H_L at scales r_i = (1+sigma)^i with
sigma = eps / (4 + 3 eps), plus the matching net hierarchy N_i (eps * r_i nets).

Each auxiliary level H'_i is assembled top-down from a per-level cover SPC_i:
a hub is skipped when H'_i already has a hub within (eps/4) r_i, replaced by a
nearby hub of a higher level when one exists, and added otherwise. H'_i is
then minimalized as a cover of the pairs in (r_i, (2+eps) r_i] at detour
1+3eps/2 and H_i = union of H'_j, j >= i.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List

import numpy as np

from config.settings import THREADS
from modules.errors import InvariantViolation, ParameterError
from modules.graph_core.distances import DistanceProvider
from modules.graph_core.nets import NetHierarchy, gonzales_net_hierarchy
from modules.spc.cover import ShortestPathCover, build_spc, local_sparsity, minimalize_spc, near_ball_counts, verify_spc
from modules.spc.towns import TownDecomposition, towns_and_sprawl

logger = logging.getLogger(__name__)

MAX_EPS = 1.0 / 6.0


def level_index(d: float, ratio: float) -> int | None:
    """The i with d in (ratio**i, ratio**(i+1)]; None for d <= 0."""
    if d <= 0:
        return None
    i = math.ceil(math.log(d) / math.log(ratio)) - 1
    while ratio ** (i + 1) < d:
        i += 1
    while ratio**i >= d:
        i -= 1
    return i


@dataclass
class HubHierarchy:
    eps: float
    sigma: float
    top_level: int
    h_prime: List[np.ndarray]
    h: List[np.ndarray]

    @property
    def ratio(self) -> float:
        return 1 + self.sigma

    @property
    def stretch(self) -> float:
        return 1.5 * self.eps

    def radius(self, i: int) -> float:
        return self.ratio**i

    @property
    def radii(self) -> list[float]:
        return [self.radius(i) for i in range(self.top_level + 1)]

    def level(self, i: int) -> np.ndarray:
        if i > self.top_level:
            return self.h[self.top_level]
        return self.h[max(i, 0)]

    def contains(self, i: int, v: int) -> bool:
        members = self.level(i)
        pos = np.searchsorted(members, v)
        return bool(pos < len(members) and members[pos] == v)

    def level_cover(self, i: int) -> ShortestPathCover:
        """H_i viewed as a cover of the pairs in (r_i, (2+eps) r_i] with detour 1+3eps/2."""
        return ShortestPathCover(r=self.radius(i), eps=self.eps, hubs=self.level(i), stretch=self.stretch)


def check_hierarchy_inputs(dp: DistanceProvider, eps: float) -> None:
    if not 0 < eps <= MAX_EPS + 1e-12:
        raise ParameterError(f"hierarchy eps must lie in (0, 1/6], got {eps}")
    if dp.n > 1 and not dp.min_distance > 1:
        raise ParameterError(
            f"minimum distance {dp.min_distance:.6g} must exceed 1; rescale the graph first"
        )


def build_hub_hierarchy(
    dp: DistanceProvider,
    eps: float,
    builder: str = "local-search",
    threads: int = THREADS,
) -> HubHierarchy:
    check_hierarchy_inputs(dp, eps)
    sigma = eps / (4 + 3 * eps)
    ratio = 1 + sigma
    top = max(0, math.ceil(math.log(dp.diameter) / math.log(ratio))) if dp.diameter > 1 else 0
    tol = dp.tol
    D = dp.matrix()

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        initial = list(pool.map(lambda i: build_spc(dp, ratio**i, eps, builder), range(top)))
    logger.info("hub hierarchy eps=%.4g: %d levels, initial covers built with %s", eps, top + 1, builder)

    h_prime: list[np.ndarray] = [np.zeros(0, dtype=np.int64) for _ in range(top + 1)]
    for i in range(top - 1, -1, -1):
        r_i = ratio**i
        radius = eps / 4 * r_i + tol
        chosen: list[int] = []
        for x in initial[i].hubs:
            x = int(x)
            if chosen and (D[x, chosen] <= radius).any():
                continue
            replacement = None
            for j in range(i + 1, top + 1):
                upper = h_prime[j]
                near = upper[D[x, upper] <= radius]
                if len(near):
                    replacement = int(near.min())
                    break
            chosen.append(replacement if replacement is not None else x)

        level = ShortestPathCover(r=r_i, eps=eps, hubs=chosen, stretch=1.5 * eps)
        h_prime[i] = minimalize_spc(dp, level).hubs

    h: list[np.ndarray] = [np.zeros(0, dtype=np.int64) for _ in range(top + 1)]
    acc = np.zeros(0, dtype=np.int64)
    for i in range(top, -1, -1):
        acc = np.union1d(acc, h_prime[i])
        h[i] = acc

    hierarchy = HubHierarchy(eps=eps, sigma=sigma, top_level=top, h_prime=h_prime, h=h)
    _assert_packing(dp, hierarchy)
    return hierarchy


def packing_violation(dp: DistanceProvider, hh: HubHierarchy) -> dict | None:
    """First broken nesting H_{i+1} ⊆ H_i or packing d(x, y) > (eps/4) r_i, if any."""
    for i, hubs in enumerate(hh.h):
        if i + 1 < len(hh.h) and not np.isin(hh.h[i + 1], hubs).all():
            stray = np.setdiff1d(hh.h[i + 1], hubs)
            return {"violation": "nesting", "level": i, "hub": int(stray[0])}
        if len(hubs) < 2:
            continue
        block = dp.submatrix(hubs, hubs) + np.diag(np.full(len(hubs), np.inf))
        closest = float(block.min())
        if not closest > hh.eps / 4 * hh.radius(i):
            a, b = np.unravel_index(int(np.argmin(block)), block.shape)
            return {"violation": "packing", "level": i, "hubs": [int(hubs[a]), int(hubs[b])], "distance": closest}
    return None


def _assert_packing(dp: DistanceProvider, hh: HubHierarchy) -> None:
    witness = packing_violation(dp, hh)
    if witness is not None:
        raise InvariantViolation(f"hub hierarchy breaks {witness['violation']} at level {witness['level']}", witness)


def verify_hierarchy(dp: DistanceProvider, hh: HubHierarchy) -> list[dict]:
    """Re-check every auxiliary level against its pairs in (r_i, (2+eps) r_i] at detour 1+3eps/2."""
    failures = []
    for i in range(hh.top_level):
        check = verify_spc(dp, ShortestPathCover(r=hh.radius(i), eps=hh.eps, hubs=hh.h_prime[i], stretch=hh.stretch))
        if not check.ok:
            failures.append({"level": i, **check.witness()})
    return failures


def hierarchy_nets(dp: DistanceProvider, hh: HubHierarchy) -> NetHierarchy:
    """Nets N_i with radius eps * r_i."""
    return gonzales_net_hierarchy(dp, base=hh.eps, ratio=hh.ratio)


def hierarchy_towns(dp: DistanceProvider, hh: HubHierarchy) -> list[TownDecomposition]:
    return [towns_and_sprawl(dp, hh.level_cover(i)) for i in range(hh.top_level + 1)]


def hierarchy_sparsity_report(dp: DistanceProvider, hh: HubHierarchy) -> list[dict]:
    rows = []
    for i in range(hh.top_level + 1):
        r_i = hh.radius(i)
        hubs = hh.h[i]
        s, witness = local_sparsity(dp, ShortestPathCover(r=r_i, eps=hh.eps, hubs=hubs))
        near = near_ball_counts(dp, hubs, (2 + 4 * hh.eps) * r_i, (2 + hh.eps) * r_i)
        rows.append(
            {
                "i": i,
                "r": r_i,
                "size": int(len(hubs)),
                "max_ball_count": s,
                "witness": witness,
                "max_near_count": int(near.max()) if len(near) else 0,
            }
        )
    return rows


def hierarchy_local_sparsity(dp: DistanceProvider, hh: HubHierarchy) -> int:
    return max(
        (local_sparsity(dp, ShortestPathCover(r=hh.radius(i), eps=hh.eps, hubs=hh.h[i]))[0] for i in range(hh.top_level + 1)),
        default=0,
    )


__all__ = [
    "HubHierarchy",
    "build_hub_hierarchy",
    "hierarchy_nets",
    "hierarchy_sparsity_report",
    "hierarchy_towns",
    "level_index",
    "verify_hierarchy",
]
