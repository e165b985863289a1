"""
test_oracle.py

Distance oracle queries, LCA tables and the binary cover store.
"""

import numpy as np
import pytest

from conftest import provider
from database.cover_store import load_oracle, load_tree_cover, save_oracle, save_tree_cover
from modules.errors import GraphParseError
from modules.graph_core import rescale_to_unit_min
from modules.oracle import LcaStructure, bench_oracle, build_oracle, euler_tour, query_pairs, sparse_table
from modules.synthetic import generate_instance
from modules.treecover import build_tree_cover, tree_distance

EPS = 0.5


@pytest.fixture(scope="module")
def built():
    graph = generate_instance("random-geometric", {"n": 14, "radius": 0.5}, seed=3).graph
    scaled, factor = rescale_to_unit_min(graph)
    dp = provider(scaled)
    tc = build_tree_cover(dp, EPS, threads=2)
    return dp, tc, build_oracle(tc, scale=factor, threads=2)


# ==========================================================
# QUERIES
# ==========================================================


def test_estimates_are_sandwiched(built):
    dp, _, oracle = built
    D = dp.matrix()
    for u in range(dp.n):
        for v in range(dp.n):
            est = oracle.query(u, v)
            assert D[u, v] - dp.tol <= est <= (1 + 2 * EPS) * D[u, v] + dp.tol


def test_query_matches_the_tree_scan(built):
    _, _, oracle = built
    for u, v in query_pairs(oracle.leaf_count, 100, seed=4):
        assert oracle.query(int(u), int(v)) == pytest.approx(oracle.query_by_scan(int(u), int(v)))
    assert oracle.query(5, 5) == 0.0


def test_lca_distance_is_the_tree_distance(built):
    _, tc, _ = built
    tree = tc.trees[-1]
    lca = LcaStructure.from_tree(tree)
    for u, v in [(0, 1), (2, 9), (13, 4)]:
        assert lca.lca(u, v) == tree.lca_naive(u, v)
        assert lca.distance(u, v) == pytest.approx(tree_distance(tree, u, v))


def test_euler_tour_and_sparse_table(built):
    _, tc, _ = built
    tree = tc.trees[0]
    tour = euler_tour(tree)
    assert len(tour) == 2 * tree.node_count - 1
    assert tour[0] == tour[-1] == tree.root
    values = np.array([5, 3, 8, 1, 9, 2])
    table = sparse_table(values)
    # row k holds the argmin over windows of length 2^k
    assert table[0].tolist() == list(range(6))
    assert values[table[2, 0]] == 1


def test_oracle_accounting(built):
    _, tc, oracle = built
    assert oracle.tree_count == tc.tree_count
    assert oracle.size_words == sum(LcaStructure.from_tree(t).size_words for t in tc.trees)
    assert oracle.scale > 1


def test_bench_reports_timings(built):
    _, _, oracle = built
    stats = bench_oracle(oracle, 50, seed=1)
    assert stats.count == 50
    assert 0 < stats.median_us <= stats.p99_us
    assert bench_oracle(oracle, 0, seed=1).mean_us is None


# ==========================================================
# STORE
# ==========================================================


def test_oracle_file_answers_like_the_original(built, tmp_path):
    _, _, oracle = built
    path = tmp_path / "o.bin"
    save_oracle(oracle, path)
    loaded = load_oracle(path)
    assert loaded.scale == oracle.scale
    assert loaded.tree_count == oracle.tree_count
    for u, v in query_pairs(oracle.leaf_count, 60, seed=2):
        assert loaded.query(int(u), int(v)) == oracle.query(int(u), int(v))


def test_tree_cover_file_keeps_every_tree(built, tmp_path):
    _, tc, _ = built
    path = tmp_path / "tc.bin"
    save_tree_cover(tc, path, scale=2.5)
    loaded, scale = load_tree_cover(path)
    assert scale == 2.5
    assert (loaded.eps, loaded.K, loaded.diameter) == (tc.eps, tc.K, tc.diameter)
    for a, b in zip(loaded.trees, tc.trees):
        assert np.array_equal(a.parent, b.parent)
        assert np.array_equal(a.parent_weight, b.parent_weight)
    assert [len(g) for g in loaded.groups] == [len(g) for g in tc.groups]


def test_wrong_magic_and_truncation_are_parse_errors(built, tmp_path):
    _, tc, oracle = built
    cover_path = tmp_path / "tc.bin"
    save_tree_cover(tc, cover_path)
    with pytest.raises(GraphParseError):
        load_oracle(cover_path)

    oracle_path = tmp_path / "o.bin"
    save_oracle(oracle, oracle_path)
    oracle_path.write_bytes(oracle_path.read_bytes()[:-5])
    with pytest.raises(GraphParseError):
        load_oracle(oracle_path)

    oracle_path.write_bytes(b"HWD")
    with pytest.raises(GraphParseError):
        load_oracle(oracle_path)
