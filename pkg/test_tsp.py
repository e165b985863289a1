"""
test_tsp.py

Subset TSP: metric tour solvers, patching, splicing and the divide recursion.
"""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse.csgraph import minimum_spanning_tree

from conftest import path_graph, provider
from modules.errors import ParameterError, PreconditionError
from modules.graph_core import WeightedGraph, rescale_to_unit_min
from modules.hierarchy import Walk
from modules.synthetic import generate_instance
from modules.tsp import (
    GUARANTEE_FACTOR,
    build_interface,
    find_dense_level,
    held_karp,
    interface_span,
    min_weight_matching,
    mst,
    nearest_neighbor_2opt,
    patch_walks,
    prepare_instance,
    q_shape,
    solve_metric_tour,
    solve_subset_tsp,
    splice,
    tour_cost,
    tsp_brute_force,
)

EPS = 1 / 6


def permutation_optimum(table: np.ndarray) -> float:
    m = len(table)
    if m < 2:
        return 0.0
    return min(tour_cost(table, [0, *rest]) for rest in itertools.permutations(range(1, m)))


def metric_tables(max_points: int = 7):
    """Euclidean distance tables of random points in the plane."""
    coords = st.floats(0, 10, allow_nan=False, allow_infinity=False)
    return st.lists(st.tuples(coords, coords), min_size=2, max_size=max_points).map(
        lambda pts: np.linalg.norm(np.asarray(pts)[:, None] - np.asarray(pts)[None, :], axis=2)
    )


@pytest.fixture
def unit_square():
    return provider(WeightedGraph.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]))


# ==========================================================
# METRIC SOLVERS
# ==========================================================


@settings(max_examples=40, deadline=None)
@given(metric_tables())
def test_held_karp_matches_permutations(table):
    order, cost = held_karp(table)
    assert sorted(order) == list(range(len(table)))
    assert cost == pytest.approx(tour_cost(table, order))
    assert cost == pytest.approx(permutation_optimum(table))


@settings(max_examples=40, deadline=None)
@given(metric_tables(max_points=9))
def test_heuristic_is_within_twice_the_tree(table):
    order, cost = nearest_neighbor_2opt(table)
    assert sorted(order) == list(range(len(table)))
    assert cost >= permutation_optimum(table) - 1e-9
    assert cost <= 2 * minimum_spanning_tree(table).sum() + 1e-9


def test_heuristic_stays_under_twice_the_mst(grid):
    dp = provider(grid)
    points = list(range(grid.vertex_count))
    table = dp.submatrix(points, points)
    _, cost = nearest_neighbor_2opt(table)
    assert cost <= 2 * sum(w for _, _, w in mst(points, dp)) + 1e-9


def test_solver_choice_reports_exactness():
    table = np.ones((20, 20)) - np.eye(20)
    assert solve_metric_tour(table[:5, :5], "exact")[2]
    assert not solve_metric_tour(table[:5, :5], "heuristic")[2]
    # past the Held-Karp limit the exact solver falls back to the heuristic
    assert not solve_metric_tour(table, "exact")[2]
    with pytest.raises(ParameterError):
        held_karp(table)
    with pytest.raises(ParameterError):
        solve_metric_tour(table, "annealing")


# ==========================================================
# PATCHING
# ==========================================================


def test_unit_square_tree_and_matching(unit_square):
    points = [0, 1, 2, 3]
    assert sum(w for _, _, w in mst(points, unit_square)) == 3.0
    for strategy in ("exact", "greedy"):
        matching = min_weight_matching(points, unit_square, strategy)
        assert sum(w for _, _, w in matching) == 2.0
        assert sorted(v for a, b, _ in matching for v in (a, b)) == points
    with pytest.raises(ParameterError):
        min_weight_matching([0, 1, 2], unit_square)


def test_patched_walk_stays_within_the_stitching_bound():
    dp = provider(path_graph([1.0, 1.0, 1.0, 1.0]))
    walks = [Walk.of([0, 1, 0]), Walk.of([4, 3, 4])]
    result = patch_walks(walks, [0, 4], dp)
    assert result.walk.closed
    assert result.walk.visits([0, 1, 3, 4])
    assert result.mst_weight == 4.0
    assert result.matching_weight == 4.0
    assert result.cost <= result.bound + 1e-9
    assert result.as_dict()["within_bound"]


def test_patch_needs_walks_ending_on_the_interface():
    dp = provider(path_graph([1.0, 1.0]))
    with pytest.raises(PreconditionError):
        patch_walks([Walk.of([1, 2, 1])], [0], dp)
    with pytest.raises(PreconditionError):
        patch_walks([], [], dp)


def test_splice_rotates_the_inner_walk():
    outer = Walk.of([0, 5, 0])
    inner = Walk.of([3, 5, 4, 3])
    assert splice(outer, inner, 5).vertices == (0, 5, 4, 3, 5, 0)
    assert splice(Walk.of([5]), inner, 5).vertices == (5, 4, 3, 5)
    assert splice(outer, Walk.of([5]), 5) == outer


# ==========================================================
# INSTANCES
# ==========================================================


def test_q_shape_grows_with_sparsity():
    assert q_shape(0.9) == 32
    small = q_shape(EPS)
    assert small == int(np.ceil(EPS**-5 * np.log(1 / EPS) ** 2))
    assert q_shape(EPS, 3) == int(np.ceil(EPS**-5 * np.log(1 / EPS) ** 2 * 9))


def test_prepare_instance_checks_its_inputs(clustered):
    graph, terminals = clustered
    dp = provider(graph)
    with pytest.raises(ParameterError):
        prepare_instance(dp, [], EPS)
    with pytest.raises(ParameterError):
        prepare_instance(dp, [dp.n], EPS)
    with pytest.raises(ParameterError):
        prepare_instance(dp, terminals, EPS, solver="annealing")
    with pytest.raises(ParameterError):
        prepare_instance(dp, terminals, EPS, matching="random")
    with pytest.raises(ParameterError):
        prepare_instance(dp, terminals, EPS, q=1)
    with pytest.raises(ParameterError):
        prepare_instance(dp, terminals, 0.5)


def test_default_q_covers_small_terminal_sets(clustered):
    graph, terminals = clustered
    inst = prepare_instance(provider(graph), terminals, EPS)
    assert inst.q == len(terminals)
    assert inst.guarantee == 1 + GUARANTEE_FACTOR * EPS
    assert inst.target == 1 + EPS


# ==========================================================
# RECURSION
# ==========================================================


def test_base_case_is_optimal_when_q_is_large(clustered):
    graph, terminals = clustered
    dp = provider(graph)
    result = solve_subset_tsp(prepare_instance(dp, terminals, EPS))
    assert result.recursions == 0
    assert result.certified
    _, optimum = held_karp(dp.submatrix(terminals, terminals))
    assert result.cost == pytest.approx(optimum)


def test_clustered_towns_force_a_divide_step(clustered):
    graph, terminals = clustered
    dp = provider(graph)
    result = solve_subset_tsp(prepare_instance(dp, terminals, EPS, q=2, threads=2))
    assert result.recursions >= 1
    assert result.walk.closed
    assert result.walk.visits(terminals)
    assert result.certified
    assert result.cost == pytest.approx(result.walk.cost(dp))
    _, optimum = held_karp(dp.submatrix(terminals, terminals))
    assert optimum - dp.tol <= result.cost <= result.target * optimum + dp.tol * len(result.walk.vertices)
    divide = sorted((e for e in result.events if e["kind"] == "divide"), key=lambda e: e["depth"])
    assert divide[0]["depth"] == 0
    assert divide[0]["patch"]["within_bound"]
    assert divide[0]["remaining_terminals"] < len(terminals)


# ==========================================================
# DENSE LEVEL AND INTERFACE
# ==========================================================


def terminal_towns_near(inst, terminals, level: int) -> np.ndarray:
    """Per vertex: how many terminal-holding towns of the level lie within (2+4eps) r_level."""
    D = inst.dp.matrix()
    decomposition = inst.towns(level)
    holding = {int(t) for t in decomposition.town_of[terminals] if t >= 0}
    reach = (2 + 4 * EPS) * inst.hierarchy.radius(level) + inst.dp.tol
    counts = np.zeros(inst.dp.n, dtype=int)
    for t in holding:
        counts += D[:, decomposition.towns[t].members].min(axis=1) <= reach
    return counts


def test_dense_level_is_the_lowest_crowded_ball(clustered):
    graph, terminals = clustered
    inst = prepare_instance(provider(graph), terminals, EPS, q=2)
    dense = find_dense_level(inst, inst.terminals)
    assert dense is not None

    for level in range(dense.level):
        assert terminal_towns_near(inst, inst.terminals, level).max() <= inst.q
    counts = terminal_towns_near(inst, inst.terminals, dense.level)
    assert dense.center == int(np.flatnonzero(counts > inst.q)[0])
    assert len(dense.candidate_towns) == counts[dense.center]
    assert set(dense.towns) <= set(dense.candidate_towns)
    assert len(dense.candidate_towns) - len(dense.towns) <= 1


def test_at_most_one_far_net_point_sits_near_the_center(clustered):
    graph, terminals = clustered
    inst = prepare_instance(provider(graph), terminals, EPS, q=2)
    dense = find_dense_level(inst, inst.terminals)
    hh = inst.hierarchy
    j = dense.level + math.ceil(interface_span(EPS, hh.sigma))
    net = inst.nets.level(j)
    near = net[inst.dp.matrix()[dense.center, net] <= (3 + 4 * EPS) * hh.radius(dense.level) + inst.dp.tol]
    assert len(near) <= 1
    assert dense.net_point == (int(near[0]) if len(near) else None)
    if dense.excluded_town is not None:
        assert inst.towns(dense.level).town_of[dense.net_point] == dense.excluded_town


def test_no_dense_level_for_few_terminals(clustered):
    graph, terminals = clustered
    inst = prepare_instance(provider(graph), terminals, EPS, q=len(terminals))
    assert find_dense_level(inst, inst.terminals) is None


def test_interface_matches_a_direct_recount(clustered):
    graph, terminals = clustered
    dp = provider(graph)
    inst = prepare_instance(dp, terminals, EPS, q=2)
    dense = find_dense_level(inst, inst.terminals)
    interface = build_interface(inst, dense)
    hh = inst.hierarchy
    D = dp.matrix()
    i = dense.level
    r_i = hh.radius(i)

    ball = [v for v in range(dp.n) if D[dense.center, v] <= (2 + 4 * EPS) * r_i + dp.tol]
    expected = set()
    for j in range(i, i + math.floor(interface_span(EPS, hh.sigma)) + 1):
        if j > hh.top_level:
            continue
        for x in hh.level(j):
            if min(D[v, x] for v in ball) <= (2 + EPS) * hh.radius(j) + dp.tol:
                expected.add(int(x))
    assert set(interface.points.tolist()) == expected

    decomposition = inst.towns(i)
    for t in dense.towns:
        for u in decomposition.towns[t].members:
            chi = min(interface.points, key=lambda x: (D[u, x], x))
            assert interface.nearest(D, np.array([u]))[0] == chi
            assert D[u, chi] <= (3 + 8 * EPS) * r_i + dp.tol


def test_divide_sweep_stays_within_the_target_ratio():
    rng = np.random.default_rng(11)
    ratios = []
    for _ in range(100):
        params = {
            "clusters": int(rng.integers(3, 5)),
            "leaves": int(rng.integers(1, 3)),
            "spoke": float(rng.uniform(12.0, 40.0)),
        }
        instance = generate_instance("clustered-towns", params)
        graph, _ = rescale_to_unit_min(instance.graph)
        dp = provider(graph)
        result = solve_subset_tsp(prepare_instance(dp, instance.terminals, EPS, q=2, threads=1))
        assert result.recursions >= 1, params
        assert any(event["kind"] == "divide" for event in result.events)
        assert result.certified

        walk, optimum = tsp_brute_force(dp, instance.terminals)
        assert walk.visits(instance.terminals)
        assert optimum - dp.tol <= result.cost <= result.target * optimum + dp.tol * len(result.walk.vertices), params
        ratios.append(result.cost / optimum)
    assert len(ratios) == 100
    assert max(ratios) <= 1 + EPS


def test_greedy_matching_and_heuristic_are_not_certified(clustered):
    graph, terminals = clustered
    dp = provider(graph)
    result = solve_subset_tsp(prepare_instance(dp, terminals, EPS, q=2, solver="heuristic", matching="greedy"))
    assert result.walk.visits(terminals)
    assert not result.certified


def test_brute_force_agrees_with_permutations():
    graph = path_graph([2.0, 1.0, 3.0, 1.5, 2.5, 1.0])
    dp = provider(graph)
    terminals = np.array([0, 2, 3, 5, 6])
    walk, cost = tsp_brute_force(dp, terminals)
    assert walk.closed and walk.visits(terminals)
    assert cost == pytest.approx(permutation_optimum(dp.submatrix(terminals, terminals)))
    # on a path the optimal tour walks to both ends and back
    assert cost == pytest.approx(2 * dp.dist(0, 6))
    with pytest.raises(ParameterError):
        tsp_brute_force(provider(path_graph([1.0] * 12)), np.arange(13))
