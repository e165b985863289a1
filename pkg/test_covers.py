"""
test_covers.py

Sparse covers and sparse partition covers.
"""

import numpy as np
import pytest

from conftest import provider
from modules.covers import (
    Cluster,
    count_membership,
    rebuild_cover,
    sparse_cover,
    sparse_partition_cover,
    verify_cover,
)
from modules.errors import ParameterError


@pytest.fixture
def geometric_dp(geometric):
    return provider(geometric)


# ==========================================================
# SPARSE COVER
# ==========================================================


def test_sparse_cover_verifies(geometric_dp):
    dp = geometric_dp
    cover = sparse_cover(dp, dp.diameter / 2, 0.1)
    check = verify_cover(dp, cover)
    assert check.ok, check
    assert cover.alpha == pytest.approx(3.4)
    assert cover.beta == pytest.approx(1.0)
    assert cover.r == pytest.approx(cover.delta / (2 * cover.alpha))


def test_every_padded_ball_sits_in_one_cluster(geometric_dp):
    dp = geometric_dp
    cover = sparse_cover(dp, dp.diameter / 2, 0.05)
    member_sets = [set(c.members.tolist()) for c in cover.clusters]
    for v in range(dp.n):
        ball = set(np.flatnonzero(dp.row(v) <= cover.padded_radius + dp.tol).tolist())
        assert any(ball <= members for members in member_sets)


def test_membership_histogram_accounts_for_every_vertex(geometric_dp):
    dp = geometric_dp
    cover = sparse_cover(dp, dp.diameter / 2, 0.1)
    assert sum(cover.histogram) == dp.n
    assert cover.histogram[0] == 0
    assert cover.max_sparsity == len(cover.histogram) - 1


def test_sparse_cover_eps_range(geometric_dp):
    with pytest.raises(ParameterError):
        sparse_cover(geometric_dp, 10.0, 0.2)
    with pytest.raises(ParameterError):
        sparse_cover(geometric_dp, 10.0, 0.0)
    with pytest.raises(ParameterError):
        sparse_cover(geometric_dp, -1.0, 0.1)


# ==========================================================
# PARTITION COVER
# ==========================================================


def test_partition_cover_verifies(geometric_dp):
    dp = geometric_dp
    cover = sparse_partition_cover(dp, dp.diameter / 2, 0.5)
    assert verify_cover(dp, cover).ok
    assert cover.r == pytest.approx(cover.delta / 6)
    for partition in cover.partitions:
        used = count_membership(dp.n, [cover.clusters[idx] for idx in partition])
        assert used.max() <= 1


def test_first_partition_is_towns_and_sprawl(geometric_dp):
    dp = geometric_dp
    cover = sparse_partition_cover(dp, dp.diameter / 2, 1.0)
    first = [cover.clusters[idx] for idx in cover.partitions[0]]
    assert {c.kind for c in first} <= {"town", "singleton"}
    assert count_membership(dp.n, first).tolist() == [1] * dp.n
    assert all(c.kind == "hub-cluster" for p in cover.partitions[1:] for c in (cover.clusters[i] for i in p))


def test_partition_cover_eps_range(geometric_dp):
    with pytest.raises(ParameterError):
        sparse_partition_cover(geometric_dp, 10.0, 1.5)


# ==========================================================
# TAMPERING
# ==========================================================


def test_rebuilt_cover_verifies(geometric_dp):
    dp = geometric_dp
    cover = sparse_partition_cover(dp, dp.diameter / 2, 0.5)
    rebuilt = rebuild_cover(dp.n, cover.delta, cover.eps, cover.clusters, cover.partitions)
    assert verify_cover(dp, rebuilt).ok
    assert np.array_equal(rebuilt.membership, cover.membership)


def test_far_member_breaks_the_radius(geometric_dp):
    dp = geometric_dp
    cover = sparse_cover(dp, dp.diameter / 2, 0.1)
    first = cover.clusters[0]
    far = int(np.argmax(dp.row(first.anchor)))
    clusters = [Cluster(first.kind, first.anchor, np.append(first.members, far), first.radius)] + cover.clusters[1:]
    check = verify_cover(dp, rebuild_cover(dp.n, cover.delta, cover.eps, clusters))
    assert not check.ok
    assert check.violation == "diameter"
    assert check.witness["cluster"] == 0


def test_no_clusters_means_no_padding(geometric_dp):
    dp = geometric_dp
    check = verify_cover(dp, rebuild_cover(dp.n, dp.diameter / 2, 0.1, []))
    assert check.violation == "padding"
    assert check.witness["vertex"] == 0


def test_recorded_sparsity_must_match(geometric_dp):
    dp = geometric_dp
    cover = sparse_cover(dp, dp.diameter / 2, 0.1)
    cover.membership = cover.membership.copy()
    cover.membership[3] += 1
    check = verify_cover(dp, cover)
    assert check.violation == "sparsity"
    assert check.witness == {"vertex": 3, "recorded": int(cover.membership[3]), "actual": int(cover.membership[3]) - 1}


def test_repeated_cluster_breaks_disjointness(geometric_dp):
    dp = geometric_dp
    cover = sparse_partition_cover(dp, dp.diameter / 2, 0.5)
    partitions = [cover.partitions[0] + [cover.partitions[0][0]]] + cover.partitions[1:]
    check = verify_cover(dp, rebuild_cover(dp.n, cover.delta, cover.eps, cover.clusters, partitions))
    assert check.violation == "disjointness"
    assert check.witness["partition"] == 0


def test_partition_indices_are_checked(geometric_dp):
    dp = geometric_dp
    cover = sparse_partition_cover(dp, dp.diameter / 2, 0.5)
    with pytest.raises(ParameterError):
        rebuild_cover(dp.n, cover.delta, cover.eps, cover.clusters, [[len(cover.clusters)]])


def test_strict_induced_lists_clusters(grid):
    dp = provider(grid)
    cover = sparse_cover(dp, 6.0, 0.1)
    check = verify_cover(dp, cover, strict_induced=True)
    assert check.ok
    assert all(0 <= idx < len(cover.clusters) for idx in check.induced_over_delta)
