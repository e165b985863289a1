"""
test_hierarchy.py

Hub hierarchy, net hierarchy and the walk rewrites.
"""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import path_graph, provider, rescaled_graphs
from modules.errors import ParameterError
from modules.graph_core import rescale_to_unit_min
from modules.hierarchy import (
    HubHierarchy,
    Walk,
    build_hub_hierarchy,
    hierarchy_nets,
    hierarchy_sparsity_report,
    hierarchy_towns,
    is_hub_net_respecting,
    level_index,
    make_hub_net_respecting,
    make_net_respecting,
    net_violations,
    packing_violation,
    verify_hierarchy,
)
from modules.synthetic import generate_instance

EPS = 1 / 6


def test_level_index_brackets_distances():
    ratio = 1.5
    for d in (1.0, 1.2, 1.5, 2.25, 2.3, 10.0):
        i = level_index(d, ratio)
        assert ratio**i < d <= ratio ** (i + 1)
    assert level_index(0.0, ratio) is None


def test_inputs_are_checked(star, geometric):
    with pytest.raises(ParameterError):
        build_hub_hierarchy(provider(star), EPS)  # minimum distance is exactly 1
    with pytest.raises(ParameterError):
        build_hub_hierarchy(provider(geometric), 0.3)


# ==========================================================
# HUBS
# ==========================================================


@settings(max_examples=10, deadline=None)
@given(rescaled_graphs(max_n=7))
def test_hierarchy_packs_nests_and_covers(graph):
    dp = provider(graph)
    hh = build_hub_hierarchy(dp, EPS, threads=2)
    assert hh.sigma == pytest.approx(EPS / (4 + 3 * EPS))
    assert hh.radius(hh.top_level) >= dp.diameter
    assert packing_violation(dp, hh) is None
    assert verify_hierarchy(dp, hh) == []
    for i in range(hh.top_level):
        assert set(hh.h[i + 1]) <= set(hh.h[i])
        assert set(hh.h_prime[i]) <= set(hh.h[i])


def test_hierarchy_on_clustered_towns(clustered):
    graph, _ = clustered
    dp = provider(graph)
    hh = build_hub_hierarchy(dp, EPS)
    assert packing_violation(dp, hh) is None
    assert verify_hierarchy(dp, hh) == []
    rows = hierarchy_sparsity_report(dp, hh)
    assert [row["i"] for row in rows] == list(range(hh.top_level + 1))
    assert all(row["max_ball_count"] >= 1 or row["size"] == 0 for row in rows)
    towns = hierarchy_towns(dp, hh)
    # each four-vertex cluster is a town at some middle scale
    assert max(len(d.towns) for d in towns) >= 4


@pytest.mark.parametrize("seed", range(10))
def test_hierarchy_on_random_geometric_graphs(seed):
    graph = generate_instance("random-geometric", {"n": 14, "radius": 0.5}, seed=seed).graph
    dp = provider(rescale_to_unit_min(graph)[0])
    hh = build_hub_hierarchy(dp, EPS)
    assert packing_violation(dp, hh) is None
    assert verify_hierarchy(dp, hh) == []

    D = dp.matrix()
    for i in range(hh.top_level):
        r = hh.radius(i)
        hubs = hh.h_prime[i]
        for u, z in itertools.combinations(range(dp.n), 2):
            d = D[u, z]
            if r + dp.tol < d <= (2 + EPS) * r:
                assert (D[u, hubs] + D[hubs, z] <= (1 + 1.5 * EPS) * d + dp.tol).any(), (i, u, z)


def test_level_cover_keeps_the_window_and_widens_the_detour(geometric):
    dp = provider(geometric)
    hh = build_hub_hierarchy(dp, EPS)
    cover = hh.level_cover(0)
    assert cover.eps == EPS
    assert cover.detour_eps == pytest.approx(1.5 * EPS)
    assert cover.town_radius == pytest.approx((2 + 1.5 * EPS) * hh.radius(0))


def test_packing_violation_reports_close_hubs():
    dp = provider(path_graph([1.5, 1.5, 1.5]))
    everything = np.arange(4)
    # r_6 = 64 and (eps/4) r_6 > 1.5, so neighbouring hubs collide only at the top
    crowded = HubHierarchy(eps=EPS, sigma=1.0, top_level=6, h_prime=[everything] * 7, h=[everything] * 7)
    witness = packing_violation(dp, crowded)
    assert witness["violation"] == "packing"
    assert witness["level"] == 6
    assert witness["distance"] == 1.5

    broken = HubHierarchy(eps=EPS, sigma=1.0, top_level=1, h_prime=[everything[:2], everything[2:]],
                          h=[everything[:2], everything[2:]])
    assert packing_violation(dp, broken)["violation"] == "nesting"


# ==========================================================
# WALKS
# ==========================================================


def closed_walks(n: int):
    return st.lists(st.integers(0, n - 1), min_size=2, max_size=8).map(lambda vs: Walk.of(vs + [vs[0]]))


@settings(max_examples=15, deadline=None)
@given(st.data(), rescaled_graphs(min_n=4, max_n=7))
def test_net_respecting_rewrite(data, graph):
    dp = provider(graph)
    hh = build_hub_hierarchy(dp, EPS)
    nets = hierarchy_nets(dp, hh)
    walk = data.draw(closed_walks(dp.n))

    respecting = make_net_respecting(dp, nets, walk)
    assert respecting.closed
    assert respecting.visits(walk.vertices)
    assert net_violations(dp, nets, respecting) == []
    assert respecting.cost(dp) <= (1 + 60 * EPS) * walk.cost(dp) + dp.tol
    assert make_net_respecting(dp, nets, respecting) == respecting


@settings(max_examples=15, deadline=None)
@given(st.data(), rescaled_graphs(min_n=4, max_n=7))
def test_hub_net_respecting_rewrite(data, graph):
    dp = provider(graph)
    hh = build_hub_hierarchy(dp, EPS)
    nets = hierarchy_nets(dp, hh)
    walk = data.draw(closed_walks(dp.n))

    rewritten = make_hub_net_respecting(dp, hh, nets, walk)
    assert rewritten.closed
    assert rewritten.visits(walk.vertices)
    assert rewritten.cost(dp) <= (1 + 77 * EPS) * walk.cost(dp) + dp.tol
    assert is_hub_net_respecting(dp, hh, nets, hierarchy_towns(dp, hh), rewritten).ok


def test_single_vertex_walk_is_left_alone(clustered):
    graph, _ = clustered
    dp = provider(graph)
    hh = build_hub_hierarchy(dp, EPS)
    walk = Walk.of([3])
    assert make_hub_net_respecting(dp, hh, hierarchy_nets(dp, hh), walk) == walk
    assert walk.cost(dp) == 0.0 and walk.closed


def test_leaving_a_town_for_a_far_leaf_is_flagged(clustered):
    graph, terminals = clustered
    dp = provider(graph)
    hh = build_hub_hierarchy(dp, EPS)
    nets = hierarchy_nets(dp, hh)
    towns = hierarchy_towns(dp, hh)

    inside = Walk.of([2, 3, 2])
    assert is_hub_net_respecting(dp, hh, nets, towns, inside).ok

    # leaves 2 and 6 sit in different clusters, two spokes apart
    jump = Walk.of([2, 6, 2])
    check = is_hub_net_respecting(dp, hh, nets, towns, jump)
    assert not check.ok
    assert set(check.connection) == {2, 6}
    assert check.required_level >= check.level
    assert math.isfinite(dp.dist(2, 6))


def test_rewrite_fixes_the_jump_and_dropping_its_hubs_breaks_it(clustered):
    graph, _ = clustered
    dp = provider(graph)
    hh = build_hub_hierarchy(dp, EPS)
    nets = hierarchy_nets(dp, hh)
    towns = hierarchy_towns(dp, hh)

    jump = Walk.of([2, 6, 2])
    rewritten = make_hub_net_respecting(dp, hh, nets, jump)
    assert is_hub_net_respecting(dp, hh, nets, towns, rewritten).ok
    assert len(rewritten.vertices) > len(jump.vertices)

    # keep only the two leaves, skipping every hub the rewrite routed through
    skipped = Walk.of([v for v in rewritten.vertices if v in (2, 6)])
    check = is_hub_net_respecting(dp, hh, nets, towns, skipped)
    assert not check.ok
    assert set(check.connection) == {2, 6}
