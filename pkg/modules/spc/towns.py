"""
modules/spc/towns.py

Town / sprawl decomposition for one shortest-path cover.

A vertex farther than (2+stretch)r from every hub spawns the town B(v, r),
stretch being the cover's detour eps (eps itself for plain covers).
Qualifying centers are processed in increasing id; a center already absorbed
into an earlier town is skipped. For a valid cover towns are disjoint, have
diameter <= r and are separated from the rest by more than r; these are
asserted, so an invalid cover fails loudly here.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from modules.errors import InvariantViolation
from modules.graph_core.distances import DistanceProvider
from modules.spc.cover import ShortestPathCover

logger = logging.getLogger(__name__)


@dataclass
class Town:
    center: int
    members: np.ndarray
    boundary_distance: float  # d(center, V \ T)


@dataclass
class TownDecomposition:
    r: float
    eps: float
    towns: List[Town]
    sprawl: np.ndarray
    town_of: np.ndarray = field(repr=False)

    def town_containing(self, v: int) -> Town | None:
        idx = int(self.town_of[v])
        return self.towns[idx] if idx >= 0 else None

    def off_center_towns(self) -> list[int]:
        """Towns whose center is not farther than (2-eps)r from the outside."""
        limit = (2 - self.eps) * self.r
        return [t.center for t in self.towns if not t.boundary_distance > limit]


def hub_distances(dp: DistanceProvider, hubs: np.ndarray) -> np.ndarray:
    if len(hubs) == 0:
        return np.full(dp.n, np.inf)
    return dp.submatrix(np.arange(dp.n), hubs).min(axis=1)


def towns_and_sprawl(dp: DistanceProvider, spc: ShortestPathCover) -> TownDecomposition:
    n = dp.n
    tol = dp.tol
    r = spc.r
    to_hub = hub_distances(dp, spc.hubs)
    qualifying = np.flatnonzero(to_hub > spc.town_radius + tol)

    town_of = np.full(n, -1, dtype=np.int64)
    towns: list[Town] = []
    for c in qualifying:
        c = int(c)
        if town_of[c] >= 0:
            continue
        row = dp.row(c)
        inside = row <= r + tol
        members = np.flatnonzero(inside)

        clash = town_of[members]
        if (clash >= 0).any():
            other = towns[int(clash[clash >= 0][0])].center
            raise InvariantViolation(
                f"towns around {other} and {c} overlap; the hub set is not a valid cover",
                {"towns": [other, c], "r": r},
            )

        outside = ~inside
        if outside.any():
            separation = float(dp.submatrix(members, np.flatnonzero(outside)).min())
            if separation <= r:
                raise InvariantViolation(
                    f"town around {c} is within {separation:.6g} <= r of the rest of the graph",
                    {"town": c, "separation": separation, "r": r},
                )
            boundary = float(row[outside].min())
        else:
            boundary = float("inf")

        diameter = float(dp.submatrix(members, members).max())
        if diameter > r + tol:
            raise InvariantViolation(
                f"town around {c} has diameter {diameter:.6g} > r",
                {"town": c, "diameter": diameter, "r": r},
            )

        town_of[members] = len(towns)
        towns.append(Town(center=c, members=members, boundary_distance=boundary))

    sprawl = np.flatnonzero(town_of < 0)
    if len(sprawl) and (to_hub[sprawl] > spc.town_radius + tol).any():
        bad = int(sprawl[np.argmax(to_hub[sprawl])])
        raise InvariantViolation(f"sprawl vertex {bad} has no hub within (2+eps)r", {"vertex": bad})

    logger.debug("r=%.4g: %d towns, %d sprawl vertices", r, len(towns), len(sprawl))
    return TownDecomposition(r=r, eps=spc.detour_eps, towns=towns, sprawl=sprawl, town_of=town_of)
