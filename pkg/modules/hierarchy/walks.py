"""
modules/hierarchy/walks.py

Walks and the two rewrites used by the TSP divide step.

make_net_respecting
    Every connection (u, z) with d(u, z) in (r_i, r_{i+1}] ends up with both
    endpoints in N_i. The longest violating connection is detoured through
    the nearest points of N_{i+16}; cost grows by at most a (1+60 eps) factor.

make_hub_net_respecting
    Net-respecting first, then every connection at level k is routed through
    a hub of H_k with detour at most (1 + 3eps/2); total factor (1+77 eps).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from modules.errors import InvariantViolation
from modules.graph_core.distances import DistanceProvider
from modules.graph_core.nets import NetHierarchy
from modules.hierarchy.hubs import HubHierarchy, level_index
from modules.spc.towns import TownDecomposition

logger = logging.getLogger(__name__)

NET_JUMP = 16


@dataclass(frozen=True)
class Walk:
    vertices: tuple[int, ...]

    @classmethod
    def of(cls, vertices: Sequence[int]) -> "Walk":
        if len(vertices) == 0:
            raise ValueError("a walk has at least one vertex")
        return cls(tuple(int(v) for v in vertices))

    @property
    def closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]

    def connections(self) -> Iterator[tuple[int, int]]:
        return zip(self.vertices[:-1], self.vertices[1:])

    def cost(self, dp: DistanceProvider) -> float:
        if len(self.vertices) < 2:
            return 0.0
        v = np.asarray(self.vertices, dtype=np.int64)
        return float(dp.matrix()[v[:-1], v[1:]].sum()) if dp.cached else sum(dp.dist(a, b) for a, b in self.connections())

    def visits(self, vertices: Sequence[int]) -> bool:
        return set(int(v) for v in vertices) <= set(self.vertices)


def _dedupe_piece(piece: list[int]) -> list[int]:
    out = [piece[0]]
    for v in piece[1:]:
        if v != out[-1]:
            out.append(v)
    return out


def net_violations(dp: DistanceProvider, nets: NetHierarchy, walk: Walk) -> list[tuple[int, int, float]]:
    """(position, level, length) of every connection with an endpoint outside its level's net."""
    out = []
    for pos, (u, z) in enumerate(walk.connections()):
        d = dp.dist(u, z)
        i = level_index(d, nets.ratio)
        if i is None or i < 0:
            continue
        if not (nets.contains(i, u) and nets.contains(i, z)):
            out.append((pos, i, d))
    return out


def make_net_respecting(dp: DistanceProvider, nets: NetHierarchy, walk: Walk) -> Walk:
    eps = nets.base_radius
    vertices = list(walk.vertices)
    original = walk.cost(dp)
    guard = 10 * dp.n * max(1, nets.top_level)

    for _ in range(guard):
        current = Walk(tuple(vertices))
        violations = net_violations(dp, nets, current)
        if not violations:
            break
        pos, i, _ = max(violations, key=lambda item: (item[2], -item[0]))
        u, z = vertices[pos], vertices[pos + 1]
        u_net = nets.nearest(dp, i + NET_JUMP, u)
        z_net = nets.nearest(dp, i + NET_JUMP, z)
        vertices[pos : pos + 2] = _dedupe_piece([u, u_net, z_net, z])
    else:
        raise InvariantViolation("net-respecting rewrite did not terminate", {"guard": guard})

    result = Walk(tuple(vertices))
    cost = result.cost(dp)
    if cost > (1 + 60 * eps) * original + dp.tol:
        raise InvariantViolation(
            "net-respecting rewrite exceeded the (1+60 eps) cost bound",
            {"before": original, "after": cost, "eps": eps},
        )
    return result


def make_hub_net_respecting(dp: DistanceProvider, hh: HubHierarchy, nets: NetHierarchy, walk: Walk) -> Walk:
    if len(walk.vertices) < 2:
        return walk
    eps = hh.eps
    original = walk.cost(dp)
    respecting = make_net_respecting(dp, nets, walk)
    D = dp.matrix()

    out = [respecting.vertices[0]]
    for u, z in respecting.connections():
        d = D[u, z]
        k = level_index(d, hh.ratio)
        if k is not None and k >= 0:
            hubs = hh.level(k)
            ok = hubs[D[u, hubs] + D[hubs, z] <= (1 + 1.5 * eps) * d + dp.tol]
            if len(ok) == 0:
                raise InvariantViolation(
                    f"no level-{k} hub within detour 1+1.5eps for connection ({u}, {z})",
                    {"connection": [int(u), int(z)], "level": k, "distance": float(d)},
                )
            x = int(ok[0])
            if x != u and x != z:
                out.append(x)
        out.append(z)

    result = Walk(tuple(out))
    cost = result.cost(dp)
    if cost > (1 + 77 * eps) * original + dp.tol:
        raise InvariantViolation(
            "hub-net-respecting rewrite exceeded the (1+77 eps) cost bound",
            {"before": original, "after": cost, "eps": eps},
        )
    return result


@dataclass
class HubNetCheck:
    ok: bool
    level: int | None = None
    position: int | None = None
    connection: tuple[int, int] | None = None
    required_level: int | None = None

    def witness(self) -> dict:
        if self.ok:
            return {}
        return {
            "level": self.level,
            "position": self.position,
            "connection": list(self.connection),
            "required_level": self.required_level,
        }


def is_hub_net_respecting(
    dp: DistanceProvider,
    hh: HubHierarchy,
    nets: NetHierarchy,
    towns_per_level: Sequence[TownDecomposition],
    walk: Walk,
) -> HubNetCheck:
    stretch = 1 + 0.75 * hh.eps
    connections = list(walk.connections())
    for level, decomposition in enumerate(towns_per_level):
        if not decomposition.towns:
            continue
        town_of = decomposition.town_of
        for pos, (a, b) in enumerate(connections):
            for u, x in ((a, b), (b, a)):
                t = town_of[u]
                if t < 0 or town_of[x] == t:
                    continue
                j = level_index(dp.dist(u, x) / stretch, hh.ratio)
                k = max(level, j if j is not None else -1)
                if not (nets.contains(k, u) and hh.contains(k, x)):
                    return HubNetCheck(False, level, pos, (int(u), int(x)), k)
    return HubNetCheck(True)
