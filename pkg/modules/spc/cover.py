"""
modules/spc/cover.py

(r, eps)-shortest-path covers: verification, local-search construction,
minimalization, local sparsity, the eps-net construction, and hub-count
bounds for minimal covers.

A pair (u, z) is *covered-scale* when d(u, z) lies in (r, (2+eps)r]. A vertex
y is a midpoint of the pair when d(u, y) + d(y, z) <= (1+stretch) d(u, z),
where stretch defaults to eps. A cover is valid when every covered-scale pair
has a midpoint among the hubs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from modules.errors import ParameterError, PreconditionError
from modules.graph_core.distances import DistanceProvider
from modules.graph_core.graph import vertex_set
from modules.graph_core.nets import gonzales_net_hierarchy
from modules.spc.hitting_set import EXACT_UNIVERSE_LIMIT, HittingSetInstance, solve_hitting_set

logger = logging.getLogger(__name__)

_CHUNK_CELLS = 1 << 22


# =====================================================================
# Data
# =====================================================================

@dataclass
class ShortestPathCover:
    r: float
    eps: float
    hubs: np.ndarray
    minimal: bool = False
    stretch: float | None = None  # detour eps; None means eps

    def __post_init__(self) -> None:
        self.hubs = vertex_set(self.hubs)

    @property
    def detour_eps(self) -> float:
        return self.eps if self.stretch is None else self.stretch

    @property
    def sparsity_radius(self) -> float:
        return (2 + 4 * self.eps) * self.r

    @property
    def town_radius(self) -> float:
        """Hubs reach every pair at scale up to 2r, so towns start past (2+stretch)r."""
        return (2 + self.detour_eps) * self.r


@dataclass
class SpcCheck:
    ok: bool
    pair: tuple[int, int] | None = None
    distance: float | None = None
    best_ratio: float | None = None

    def witness(self) -> dict:
        if self.ok:
            return {}
        return {"pair": list(self.pair), "distance": self.distance, "best_ratio": self.best_ratio}


@dataclass
class PairCoverage:
    """All covered-scale pairs of one (r, eps), with lazy midpoint tests."""

    dp: DistanceProvider
    r: float
    eps: float
    stretch: float | None = None
    us: np.ndarray = field(init=False)
    zs: np.ndarray = field(init=False)
    lengths: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        tol = self.dp.tol
        D = self.dp.matrix()
        iu, iz = np.triu_indices(self.dp.n, 1)
        d = D[iu, iz]
        keep = (d > self.r + tol) & (d <= (2 + self.eps) * self.r + tol)
        self.us, self.zs, self.lengths = iu[keep], iz[keep], d[keep]
        detour = self.eps if self.stretch is None else self.stretch
        self._bound = (1 + detour) * self.lengths + tol

    def __len__(self) -> int:
        return len(self.us)

    def midpoints(self, columns: np.ndarray, rows: np.ndarray | None = None) -> np.ndarray:
        """Boolean matrix [pair, column]: is the column vertex a midpoint of the pair."""
        columns = np.asarray(columns, dtype=np.int64)
        rows = np.arange(len(self)) if rows is None else np.asarray(rows, dtype=np.int64)
        out = np.zeros((len(rows), len(columns)), dtype=bool)
        if len(rows) == 0 or len(columns) == 0:
            return out
        D = self.dp.matrix()
        step = max(1, _CHUNK_CELLS // max(1, len(columns)))
        for start in range(0, len(rows), step):
            chunk = rows[start : start + step]
            detour = D[self.us[chunk]][:, columns] + D[self.zs[chunk]][:, columns]
            out[start : start + len(chunk)] = detour <= self._bound[chunk, None]
        return out

    def best_ratio(self, row: int, hubs: np.ndarray) -> float:
        if len(hubs) == 0:
            return float("inf")
        D = self.dp.matrix()
        u, z = self.us[row], self.zs[row]
        return float((D[u, hubs] + D[z, hubs]).min() / self.lengths[row])


# =====================================================================
# Verification
# =====================================================================

def verify_spc(dp: DistanceProvider, spc: ShortestPathCover, coverage: PairCoverage | None = None) -> SpcCheck:
    coverage = coverage or PairCoverage(dp, spc.r, spc.eps, spc.stretch)
    if len(coverage) == 0:
        return SpcCheck(ok=True)
    covered = coverage.midpoints(spc.hubs).any(axis=1)
    if covered.all():
        return SpcCheck(ok=True)
    row = int(np.flatnonzero(~covered)[0])
    return SpcCheck(
        ok=False,
        pair=(int(coverage.us[row]), int(coverage.zs[row])),
        distance=float(coverage.lengths[row]),
        best_ratio=coverage.best_ratio(row, spc.hubs),
    )


# =====================================================================
# Local search
# =====================================================================

@dataclass
class LocalSearchTrace:
    iterations: int = 0
    last_center: int | None = None
    last_hitting_set_size: int | None = None
    sizes: list[int] = field(default_factory=list)


def build_spc_local_search(
    dp: DistanceProvider,
    r: float,
    eps: float,
    hs_strategy: str = "greedy",
    *,
    restrict_pairs: bool = True,
    trace: LocalSearchTrace | None = None,
) -> ShortestPathCover:
    """
    Shrink SPC = V around its densest (2+4eps)r ball until replacing the
    ball's hubs by a hitting set of its affected pairs stops helping.
    """
    if r <= 0:
        raise ParameterError(f"scale r must be positive, got {r}")
    if not 0 <= eps <= 1:
        raise ParameterError(f"eps must lie in [0, 1], got {eps}")

    trace = trace if trace is not None else LocalSearchTrace()
    n = dp.n
    tol = dp.tol
    D = dp.matrix()
    coverage = PairCoverage(dp, r, eps)
    within = D <= (2 + 4 * eps) * r + tol
    # affected pairs have both endpoints within this distance of the ball center
    reach = (2 + 4 * eps) * r + (1 + eps / 2) * (2 + eps) * r + tol

    hubs = np.ones(n, dtype=bool)
    trace.sizes.append(n)
    while True:
        counts = (within & hubs).sum(axis=1)
        v = int(np.argmax(counts))
        if counts[v] == 0:
            break
        ball_hubs = np.flatnonzero(within[v] & hubs)

        if restrict_pairs:
            candidates = np.flatnonzero((D[v, coverage.us] <= reach) & (D[v, coverage.zs] <= reach))
        else:
            candidates = np.arange(len(coverage))
        affected = candidates[coverage.midpoints(ball_hubs, candidates).any(axis=1)]

        if len(affected):
            incidence = coverage.midpoints(np.arange(n), affected)
            instance = HittingSetInstance.from_incidence(incidence)
            strategy = hs_strategy
            if strategy == "exact-small" and len(instance.universe) > EXACT_UNIVERSE_LIMIT:
                strategy = "greedy"
            replacement = solve_hitting_set(instance, strategy)
        else:
            replacement = np.zeros(0, dtype=np.int64)

        candidate = hubs & ~within[v]
        candidate[replacement] = True
        trace.iterations += 1
        trace.last_center = v
        trace.last_hitting_set_size = len(replacement)
        if candidate.sum() >= hubs.sum():
            break
        hubs = candidate
        trace.sizes.append(int(hubs.sum()))
        logger.debug("local search r=%.4g: ball at %d, |SPC| -> %d", r, v, trace.sizes[-1])

    logger.debug("local search r=%.4g eps=%.4g: %d hubs after %d iterations", r, eps, hubs.sum(), trace.iterations)
    return ShortestPathCover(r=r, eps=eps, hubs=np.flatnonzero(hubs))


# =====================================================================
# Minimalization and sparsity
# =====================================================================

def minimalize_spc(dp: DistanceProvider, spc: ShortestPathCover) -> ShortestPathCover:
    """Drop hubs in decreasing id order while the cover stays valid."""
    coverage = PairCoverage(dp, spc.r, spc.eps, spc.stretch)
    hubs = spc.hubs
    mask = coverage.midpoints(hubs)
    counts = mask.sum(axis=1)
    if len(coverage) and (counts == 0).any():
        check = verify_spc(dp, spc, coverage)
        raise PreconditionError(f"cannot minimalize an invalid cover: counterexample {check.witness()}")

    keep = np.ones(len(hubs), dtype=bool)
    for idx in range(len(hubs) - 1, -1, -1):
        column = mask[:, idx]
        if not (counts[column] == 1).any():
            keep[idx] = False
            counts -= column.astype(np.int64)
    return ShortestPathCover(r=spc.r, eps=spc.eps, hubs=hubs[keep], minimal=True, stretch=spc.stretch)


def local_sparsity(dp: DistanceProvider, spc: ShortestPathCover) -> tuple[int, int]:
    if len(spc.hubs) == 0:
        return 0, 0
    counts = (dp.submatrix(np.arange(dp.n), spc.hubs) <= spc.sparsity_radius + dp.tol).sum(axis=1)
    witness = int(np.argmax(counts))
    return int(counts[witness]), witness


# =====================================================================
# eps-net construction
# =====================================================================

def epsnet_spc(dp: DistanceProvider, r: float, eps: float) -> ShortestPathCover:
    """An (eps/2)r-net is always an (r, eps)-cover: the net point next to u is a midpoint."""
    if eps <= 0:
        raise ParameterError("the net construction needs eps > 0 (eps = 0 would need every vertex)")
    if r <= 0:
        raise ParameterError(f"scale r must be positive, got {r}")
    net = gonzales_net_hierarchy(dp, base=eps * r / 2, ratio=2.0).level(0)
    return ShortestPathCover(r=r, eps=eps, hubs=net)


def greedy_spc(dp: DistanceProvider, r: float, eps: float, hs_strategy: str = "greedy") -> ShortestPathCover:
    """One hitting set over every covered-scale pair at once."""
    if r <= 0:
        raise ParameterError(f"scale r must be positive, got {r}")
    if not 0 <= eps <= 1:
        raise ParameterError(f"eps must lie in [0, 1], got {eps}")
    coverage = PairCoverage(dp, r, eps)
    if len(coverage) == 0:
        return ShortestPathCover(r=r, eps=eps, hubs=np.zeros(0, dtype=np.int64))
    instance = HittingSetInstance.from_incidence(coverage.midpoints(np.arange(dp.n)))
    hubs = solve_hitting_set(instance, hs_strategy)
    logger.debug("greedy cover r=%.4g eps=%.4g: %d hubs for %d pairs", r, eps, len(hubs), len(coverage))
    return ShortestPathCover(r=r, eps=eps, hubs=hubs)


SPC_BUILDERS = {
    "local-search": build_spc_local_search,
    "greedy": lambda dp, r, eps: greedy_spc(dp, r, eps),
    "epsnet": lambda dp, r, eps: epsnet_spc(dp, r, eps),
}


def build_spc(dp: DistanceProvider, r: float, eps: float, builder: str = "local-search") -> ShortestPathCover:
    try:
        return SPC_BUILDERS[builder](dp, r, eps)
    except KeyError:
        raise ParameterError(f"unknown SPC builder '{builder}'. Available: {list(SPC_BUILDERS)}") from None


# =====================================================================
# Hub-count bounds for minimal covers
# =====================================================================

@dataclass
class HubBoundsReport:
    local_sparsity: int
    near_ball_counts: np.ndarray
    wide_ball_counts: np.ndarray
    near_limit: int
    wide_limit: int

    @property
    def near_flagged(self) -> list[int]:
        return np.flatnonzero(self.near_ball_counts > self.near_limit).tolist()

    @property
    def wide_flagged(self) -> list[int]:
        return np.flatnonzero(self.wide_ball_counts > self.wide_limit).tolist()


def near_ball_counts(dp: DistanceProvider, hubs: np.ndarray, inner: float, outer: float) -> np.ndarray:
    """Per vertex v: hubs within `outer` of the ball B(v, inner)."""
    n = dp.n
    counts = np.zeros(n, dtype=np.int64)
    if len(hubs) == 0:
        return counts
    D = dp.matrix()
    within = D <= inner + dp.tol
    for x in hubs:
        reach = np.where(within, D[x][None, :], np.inf).min(axis=1)
        counts += reach <= outer + dp.tol
    return counts


def verify_hub_bounds(dp: DistanceProvider, spc: ShortestPathCover) -> HubBoundsReport:
    s, _ = local_sparsity(dp, spc)
    near = near_ball_counts(dp, spc.hubs, spc.sparsity_radius, spc.town_radius)
    if len(spc.hubs):
        wide = (dp.submatrix(np.arange(dp.n), spc.hubs) <= (2.8 + 6 * spc.eps) * spc.r + dp.tol).sum(axis=1)
    else:
        wide = np.zeros(dp.n, dtype=np.int64)
    return HubBoundsReport(s, near, wide, near_limit=3 * s * s, wide_limit=2 * s * s)
