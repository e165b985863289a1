"""
modules/tsp/divide.py

Divide and conquer for Subset TSP on the hub hierarchy.

    1. Find the lowest level i and center v where the ball B_v of radius
       (2+4eps) r_i meets more than q towns that hold terminals.
    2. Drop the town holding the single high-level net point near v, solve
       every other town separately against a virtual point p standing for
       the interface I around B_v.
    3. Recurse on K' = {t_U} + (K minus the solved towns), stitch the town
       walks onto I, make the stitched walk hub-net-respecting and splice it
       into the recursive walk at t_U.

Without a dense level the whole terminal set goes to the metric solver.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from modules.errors import InvariantViolation, PreconditionError
from modules.hierarchy.walks import Walk, make_hub_net_respecting
from modules.tsp.instance import TspInstance
from modules.tsp.patching import PatchResult, patch_walks
from modules.tsp.solvers import closed_walk, solve_metric_tour

logger = logging.getLogger(__name__)


def interface_span(eps: float, sigma: float) -> float:
    """log_{1+sigma}(6/eps + 8): how many levels above i the interface reaches."""
    return math.log(6 / eps + 8) / math.log(1 + sigma)


# ==========================================================
# DENSE LEVEL
# ==========================================================


@dataclass
class DenseLevel:
    level: int
    center: int
    candidate_towns: List[int]  # U': town indices at this level
    towns: List[int]  # U: U' minus the excluded town
    net_point: Optional[int] = None
    excluded_town: Optional[int] = None


def find_dense_level(inst: TspInstance, terminals: np.ndarray) -> DenseLevel | None:
    if len(terminals) <= inst.q:
        return None
    dp = inst.dp
    hh = inst.hierarchy
    nets = inst.nets
    D = dp.matrix()
    eps = hh.eps
    jump = math.ceil(interface_span(eps, hh.sigma))

    for i in range(hh.top_level + 1):
        decomposition = inst.towns(i)
        holding = np.unique(decomposition.town_of[terminals])
        holding = holding[holding >= 0]
        if len(holding) <= inst.q:
            continue

        r_i = hh.radius(i)
        reach = (2 + 4 * eps) * r_i + dp.tol
        # (towns, n): distance from every vertex to each terminal town
        to_town = np.stack([D[:, decomposition.towns[int(t)].members].min(axis=1) for t in holding])
        counts = (to_town <= reach).sum(axis=0)
        dense = np.flatnonzero(counts > inst.q)
        if len(dense) == 0:
            continue

        v = int(dense[0])
        candidates = [int(t) for t in holding[to_town[:, v] <= reach]]

        j = i + jump
        net = nets.level(j)
        near = net[D[v, net] <= (3 + 4 * eps) * r_i + dp.tol]
        if len(near) > 1:
            raise InvariantViolation(
                f"{len(near)} level-{j} net points inside the exclusion ball around {v}",
                {"level": i, "center": v, "net_level": j, "net_points": [int(x) for x in near]},
            )
        net_point = int(near[0]) if len(near) else None
        excluded = None
        if net_point is not None:
            owner = int(decomposition.town_of[net_point])
            if owner in candidates:
                excluded = owner
        towns = [t for t in candidates if t != excluded]
        logger.debug(
            "dense level %d at center %d: %d candidate towns, excluded %s", i, v, len(candidates), excluded
        )
        return DenseLevel(i, v, candidates, towns, net_point, excluded)
    return None


# ==========================================================
# INTERFACE
# ==========================================================


@dataclass
class Interface:
    level: int
    center: int
    points: np.ndarray
    by_level: Dict[int, np.ndarray] = field(repr=False)
    net_point: Optional[int] = None

    def nearest(self, D: np.ndarray, vertices: np.ndarray) -> np.ndarray:
        """chi_u for every u: nearest interface point, ties to the lowest id."""
        if len(self.points) == 0:
            raise PreconditionError("interface is empty")
        return self.points[np.argmin(D[np.ix_(vertices, self.points)], axis=1)]


def build_interface(inst: TspInstance, dense: DenseLevel) -> Interface:
    dp = inst.dp
    hh = inst.hierarchy
    D = dp.matrix()
    eps = hh.eps
    i, v = dense.level, dense.center
    r_i = hh.radius(i)

    ball = np.flatnonzero(D[v] <= (2 + 4 * eps) * r_i + dp.tol)
    top = i + math.floor(interface_span(eps, hh.sigma))
    by_level: Dict[int, np.ndarray] = {}
    for j in range(i, top + 1):
        hubs = hh.level(j) if j <= hh.top_level else np.zeros(0, dtype=np.int64)
        if len(hubs) == 0:
            by_level[j] = hubs
            continue
        to_ball = D[np.ix_(ball, hubs)].min(axis=0)
        by_level[j] = hubs[to_ball <= (2 + eps) * hh.radius(j) + dp.tol]
    points = np.unique(np.concatenate(list(by_level.values()))).astype(np.int64)
    interface = Interface(i, v, points, by_level, dense.net_point)

    if len(dense.towns) >= 2:
        if len(points) == 0:
            raise InvariantViolation(
                f"empty interface around {v} at level {i} with {len(dense.towns)} towns",
                {"level": i, "center": v, "towns": len(dense.towns)},
            )
        decomposition = inst.towns(i)
        members = np.concatenate([decomposition.towns[t].members for t in dense.towns])
        chi = interface.nearest(D, members)
        gaps = D[members, chi]
        limit = (3 + 8 * eps) * r_i + dp.tol
        if (gaps > limit).any():
            worst = int(np.argmax(gaps))
            raise InvariantViolation(
                f"vertex {members[worst]} is {gaps[worst]:.6g} from the interface, above (3+8eps) r_i",
                {"vertex": int(members[worst]), "distance": float(gaps[worst]), "limit": limit},
            )
    logger.debug("interface at level %d: %d points over levels %d..%d", i, len(points), i, top)
    return interface


# ==========================================================
# TOWN SUB-INSTANCES
# ==========================================================


@dataclass
class TownSubInstance:
    """Terminals of one town plus a virtual point p (the last row of table)."""

    town: int
    terminals: np.ndarray
    chi: np.ndarray
    table: np.ndarray

    @classmethod
    def build(cls, inst: TspInstance, interface: Interface, town: int, terminals: np.ndarray) -> "TownSubInstance":
        D = inst.dp.matrix()
        m = len(terminals)
        chi = interface.nearest(D, terminals)
        table = np.zeros((m + 1, m + 1))
        table[:m, :m] = D[np.ix_(terminals, terminals)]
        table[:m, m] = table[m, :m] = D[terminals, chi]

        # table[a, b] + table[b, c] >= table[a, c] over all triples
        slack = table[:, :, None] + table[None, :, :] - table[:, None, :]
        if slack.min() < -inst.dp.tol:
            a, b, c = np.unravel_index(int(np.argmin(slack)), slack.shape)
            raise InvariantViolation(
                f"town {town} sub-instance breaks the triangle inequality",
                {"town": town, "triple": [int(a), int(b), int(c)], "slack": float(slack.min())},
            )
        return cls(town, terminals, chi, table)


@dataclass
class TownWalk:
    town: int
    walk: Walk
    cost: float
    exact: bool


def solve_town(sub: TownSubInstance, solver: str = "exact") -> TownWalk:
    m = len(sub.terminals)
    if m == 1:
        s, chi = int(sub.terminals[0]), int(sub.chi[0])
        return TownWalk(sub.town, Walk.of([chi, s, chi]), 2 * float(sub.table[0, 1]), True)

    order, cost, exact = solve_metric_tour(sub.table, solver)
    k = order.index(m)
    inner = order[k + 1 :] + order[:k]
    first, last = inner[0], inner[-1]
    vertices = [int(sub.chi[first])] + [int(sub.terminals[o]) for o in inner] + [int(sub.chi[last])]
    return TownWalk(sub.town, Walk.of(vertices), cost, exact)


# ==========================================================
# RECURSION
# ==========================================================


@dataclass
class TspResult:
    walk: Walk
    cost: float
    terminals: np.ndarray
    certified: bool
    guarantee: float
    target: float
    recursions: int
    events: List[dict] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "cost": self.cost,
            "terminals": int(len(self.terminals)),
            "certified": self.certified,
            "guarantee": self.guarantee,
            "target": self.target,
            "recursions": self.recursions,
        }


def splice(outer: Walk, inner: Walk, at: int) -> Walk:
    """Insert the closed walk inner into the closed walk outer at vertex at."""
    if len(inner.vertices) < 2:
        return outer
    body = list(inner.vertices[:-1])
    k = body.index(at)
    rotated = body[k:] + body[:k] + [at]
    if len(outer.vertices) == 1:
        return Walk.of(rotated)
    pos = outer.vertices.index(at)
    return Walk.of(list(outer.vertices[:pos]) + rotated + list(outer.vertices[pos + 1 :]))


def _base_case(inst: TspInstance, terminals: np.ndarray, depth: int, events: List[dict]) -> tuple[Walk, bool]:
    dp = inst.dp
    if len(terminals) == 1:
        events.append({"kind": "base", "depth": depth, "terminals": 1, "exact": True, "cost": 0.0})
        return Walk.of([int(terminals[0])]), True

    order, cost, exact = solve_metric_tour(dp.submatrix(terminals, terminals), inst.solver)
    walk = closed_walk(terminals, order)
    if inst.hierarchy_built:
        walk = make_hub_net_respecting(dp, inst.hierarchy, inst.nets, walk)
    events.append(
        {
            "kind": "base",
            "depth": depth,
            "terminals": int(len(terminals)),
            "exact": exact,
            "solver_cost": cost,
            "cost": walk.cost(dp),
        }
    )
    return walk, exact


def _solve(inst: TspInstance, terminals: np.ndarray, depth: int, events: List[dict]) -> tuple[Walk, bool]:
    dp = inst.dp
    if depth > dp.n:
        raise InvariantViolation("subset TSP recursion exceeded n levels", {"depth": depth, "terminals": len(terminals)})

    dense = find_dense_level(inst, terminals)
    if dense is None:
        return _base_case(inst, terminals, depth, events)

    interface = build_interface(inst, dense)
    decomposition = inst.towns(dense.level)
    in_town = decomposition.town_of[terminals]
    subs = [TownSubInstance.build(inst, interface, t, terminals[in_town == t]) for t in dense.towns]
    with ThreadPoolExecutor(max_workers=max(1, inst.threads)) as pool:
        town_walks = list(pool.map(lambda sub: solve_town(sub, inst.solver), subs))

    solved = np.isin(in_town, dense.towns)
    anchor = int(terminals[solved].min())
    remaining = np.union1d(terminals[~solved], [anchor]).astype(np.int64)
    if len(remaining) >= len(terminals):
        raise InvariantViolation(
            "divide step did not shrink the terminal set", {"depth": depth, "terminals": len(terminals)}
        )

    logger.debug(
        "depth %d: level %d center %d, %d towns, |I|=%d, |K'|=%d",
        depth, dense.level, dense.center, len(dense.towns), len(interface.points), len(remaining),
    )
    recursive, recursive_exact = _solve(inst, remaining, depth + 1, events)

    patched: PatchResult = patch_walks([tw.walk for tw in town_walks], interface.points, dp, inst.matching)
    respecting = make_hub_net_respecting(dp, inst.hierarchy, inst.nets, patched.walk)
    walk = splice(recursive, respecting, anchor)

    cost = walk.cost(dp)
    recursive_cost = recursive.cost(dp)
    stitched = patched.bound if patched.exact_matching else (
        patched.walks_weight + patched.mst_weight + patched.matching_weight
    )
    limit = recursive_cost + (1 + 77 * inst.eps) * stitched + dp.tol * len(walk.vertices)
    if cost > limit:
        raise InvariantViolation(
            "stitched walk exceeds the recursive cost plus (1+77eps) times the patching bound",
            {"cost": cost, "limit": limit, "depth": depth},
        )

    exact = recursive_exact and all(tw.exact for tw in town_walks) and patched.exact_matching
    events.append(
        {
            "kind": "divide",
            "depth": depth,
            "level": dense.level,
            "center": dense.center,
            "towns": len(dense.towns),
            "candidate_towns": len(dense.candidate_towns),
            "excluded_town_center": (
                int(decomposition.towns[dense.excluded_town].center) if dense.excluded_town is not None else None
            ),
            "net_point": dense.net_point,
            "interface_size": int(len(interface.points)),
            "anchor": anchor,
            "remaining_terminals": int(len(remaining)),
            "town_costs": [tw.cost for tw in town_walks],
            "patch": patched.as_dict(),
            "recursive_cost": recursive_cost,
            "cost": cost,
        }
    )
    return walk, exact


def solve_subset_tsp(inst: TspInstance) -> TspResult:
    start = time.perf_counter()
    terminals = inst.terminals
    events: List[dict] = []
    walk, exact = _solve(inst, terminals, 0, events)

    if not walk.closed:
        raise InvariantViolation("subset TSP walk is not closed", {"first": walk.vertices[0], "last": walk.vertices[-1]})
    if not walk.visits(terminals):
        missing = sorted(set(int(t) for t in terminals) - set(walk.vertices))
        raise InvariantViolation("subset TSP walk misses terminals", {"missing": missing})

    cost = walk.cost(inst.dp)
    recursions = sum(1 for e in events if e["kind"] == "divide")
    if not exact:
        logger.warning("a heuristic sub-solve or greedy matching fired; the run is not certified")
    logger.info(
        "subset TSP over %d terminals: cost %.6g, %d divide steps, %.2fs",
        len(terminals), cost, recursions, time.perf_counter() - start,
    )
    return TspResult(
        walk=walk,
        cost=cost,
        terminals=terminals,
        certified=exact,
        guarantee=inst.guarantee,
        target=inst.target,
        recursions=recursions,
        events=events,
    )
