"""
test_graph_core.py

Loaders, distance provider, balls, induced distances and net hierarchies.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import brute_distances, clique_pair, connected_graphs, path_graph, provider
from modules.errors import DisconnectedGraphError, GraphParseError, ParameterError, PreconditionError
from modules.graph_core import (
    DistanceProvider,
    WeightedGraph,
    aspect_ratio,
    ball,
    gonzales_net_hierarchy,
    induced_distance,
    load_graph,
    rescale_to_unit_min,
    single_source_distances,
    strong_diameter,
    weak_diameter,
    write_edge_list,
)
from modules.synthetic import generate_instance


# ==========================================================
# LOADING
# ==========================================================


def test_dimacs_is_one_based_and_undirected(tmp_path):
    path = tmp_path / "g.gr"
    path.write_text("c tiny\np sp 3 3\na 1 2 4\na 2 1 2\na 2 3 1\n")
    graph = load_graph(path)
    assert graph.vertex_count == 3
    assert graph.edges == ((0, 1, 2.0), (1, 2, 1.0))
    assert graph.source.merged_parallel_edges == 1


def test_edge_list_self_loops_are_dropped(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# vertices 3\n0 1 1.5\n1 1 3\n1 2 2\n")
    graph = load_graph(path)
    assert graph.edge_count == 2
    assert graph.source.dropped_self_loops == 1


def test_parse_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "bad.gr"
    path.write_text("p sp 2 1\na 1 x 3\n")
    with pytest.raises(GraphParseError) as info:
        load_graph(path)
    assert info.value.line_number == 2


def test_negative_weight_is_rejected(tmp_path):
    path = tmp_path / "neg.txt"
    path.write_text("0 1 -1\n")
    with pytest.raises(GraphParseError):
        load_graph(path)


def test_disconnected_graph_names_two_components():
    with pytest.raises(DisconnectedGraphError):
        WeightedGraph.from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)])


def test_edge_list_written_then_loaded_gives_same_graph(tmp_path, grid):
    path = tmp_path / "grid.txt"
    write_edge_list(grid, path)
    assert load_graph(path).edges == grid.edges


# ==========================================================
# DISTANCES
# ==========================================================


@settings(max_examples=40, deadline=None)
@given(connected_graphs())
def test_provider_matches_floyd_warshall(graph):
    dp = provider(graph)
    assert np.allclose(dp.matrix(), brute_distances(graph))


def test_single_source_on_a_path():
    graph = path_graph([1.0, 2.5, 0.5])
    assert single_source_distances(graph, 1).tolist() == [1.0, 0.0, 2.5, 3.0]


def test_duostar_pairs_are_close_through_their_apex():
    graph = generate_instance("duostar", {"pairs": 3, "eps": 0.1}).graph
    dp = provider(graph)
    alpha = 1 / (7 + 16 * 0.1)
    assert graph.vertex_count == 10
    assert dp.dist(1, 2) == pytest.approx(2 * alpha)
    assert dp.dist(1, 4) == 2.0
    assert dp.dist(3, 6) == pytest.approx(2 + 2 * alpha)


def test_memo_mode_agrees_with_cached_mode(grid):
    cached = DistanceProvider(grid)
    memo = DistanceProvider(grid, apsp_cap=1)
    assert cached.cached and not memo.cached
    assert np.allclose(memo.matrix(), cached.matrix())
    assert memo.diameter == cached.diameter == 6.0


def test_ball_is_closed(star):
    dp = provider(star)
    assert ball(dp, 1, 2.0).tolist() == [0, 1, 2, 3, 4, 5]
    assert ball(dp, 1, 1.0).tolist() == [0, 1]
    with pytest.raises(PreconditionError):
        ball(dp, 0, -1.0)


def test_induced_distance_can_exceed_metric_distance():
    # 0-1-2 path of weight 2 plus a detour 0-3-2 of weight 10
    graph = WeightedGraph.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (0, 3, 5.0), (3, 2, 5.0)])
    dp = provider(graph)
    assert dp.dist(0, 2) == 2.0
    assert induced_distance(graph, np.array([0, 2, 3]), 0, 2) == 10.0
    assert math.isinf(induced_distance(graph, np.array([0, 2]), 0, 2))
    assert strong_diameter(graph, np.array([0, 2, 3])) == 10.0
    assert weak_diameter(dp, np.array([0, 2, 3])) == 5.0


def test_rescale_makes_minimum_distance_exceed_one():
    graph = path_graph([0.25, 0.5, 2.0])
    scaled, factor = rescale_to_unit_min(graph)
    assert factor == pytest.approx((1 + 1e-6) / 0.25)
    assert provider(scaled).min_distance > 1
    assert aspect_ratio(provider(scaled)) == pytest.approx(aspect_ratio(provider(graph)))


def test_rescale_rejects_zero_weight_edges():
    with pytest.raises(ParameterError):
        rescale_to_unit_min(path_graph([0.0, 1.0]))


# ==========================================================
# NETS
# ==========================================================


@settings(max_examples=30, deadline=None)
@given(connected_graphs(min_n=3))
def test_net_levels_pack_and_cover(graph):
    dp = provider(graph)
    nets = gonzales_net_hierarchy(dp, base=1.0, ratio=2.0)
    D = dp.matrix()
    previous = None
    for i, members in enumerate(nets.levels):
        delta = nets.radius(i)
        if len(members) > 1:
            block = D[np.ix_(members, members)] + np.diag(np.full(len(members), np.inf))
            assert block.min() > delta - dp.tol
        assert D[:, members].min(axis=1).max() <= delta + dp.tol
        if previous is not None:
            assert set(members) <= set(previous)
        previous = members
    assert len(nets.level(nets.top_level)) == 1


def test_gonzales_order_starts_at_zero_and_goes_far(cliques):
    dp = provider(cliques)
    nets = gonzales_net_hierarchy(dp, base=1.0, ratio=2.0)
    assert nets.gonzales_order[0] == 0
    assert nets.gonzales_order[1] in (4, 5, 6, 7)
    assert nets.insertion_radii[1] == dp.row(0).max()


def test_cliques_fixture_diameter():
    dp = provider(clique_pair(3, bridge=4.0))
    assert dp.diameter == 6.0
