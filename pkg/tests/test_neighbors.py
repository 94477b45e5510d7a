import math

import numpy as np
import pytest

from conftest import matrix_from
from manifoldkit import neighbors as nb
from manifoldkit.errors import KTooLarge, NonPositiveSigma, ZeroBandwidth, ZeroNormRow
from oracles import brute_knn, brute_pairwise_cosine, brute_pairwise_euclidean


def test_single_row():
    D = nb.pairwise_distances(matrix_from([[1.0, 2.0]]))
    assert D.values.shape == (1, 1) and D.values[0, 0] == 0.0


def test_345_triangle():
    D = nb.pairwise_distances(matrix_from([[0.0, 0.0], [3.0, 4.0]]))
    assert D.values[0, 1] == 5.0


def test_euclidean_matches_brute_force(rng):
    X = rng.normal(size=(5, 3))
    D = nb.pairwise_distances(matrix_from(X))
    assert np.abs(D.values - brute_pairwise_euclidean(X)).max() <= 1e-12


def test_cosine_matches_brute_force(rng):
    X = rng.normal(size=(6, 4))
    D = nb.pairwise_distances(matrix_from(X), "cosine")
    assert np.abs(D.values - brute_pairwise_cosine(X)).max() <= 1e-12


def test_cosine_zero_norm_row():
    with pytest.raises(ZeroNormRow):
        nb.pairwise_distances(matrix_from([[1.0, 0.0], [0.0, 0.0]]), "cosine")


def test_exact_symmetry(rng):
    X = rng.normal(size=(30, 7))
    D = nb.pairwise_distances(matrix_from(X))
    assert np.array_equal(D.values, D.values.T)


def test_triangle_inequality(rng):
    X = rng.normal(size=(25, 4))
    D = nb.pairwise_distances(matrix_from(X)).values
    n = len(D)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                assert D[i, j] <= D[i, k] + D[k, j] + 1e-9


def test_knn_collinear_line():
    D = nb.pairwise_distances(matrix_from([[0.0], [1.0], [3.0]]))
    g = nb.knn_graph(D, 1)
    assert g.indices[:, 0].tolist() == [1, 0, 1]


def test_knn_complete_graph():
    D = nb.pairwise_distances(matrix_from(np.arange(12, dtype=float).reshape(4, 3)))
    g = nb.knn_graph(D, 3)
    for i in range(4):
        assert sorted(g.indices[i].tolist()) == sorted(set(range(4)) - {i})


def test_knn_matches_brute_force(rng):
    X = rng.normal(size=(20, 3))
    D = nb.pairwise_distances(matrix_from(X))
    g = nb.knn_graph(D, 4)
    bi, bd = brute_knn(D.values, 4)
    assert np.array_equal(g.indices, bi)
    assert np.abs(g.distances - bd).max() == 0.0


def test_knn_distances_ascending(rng):
    X = rng.normal(size=(15, 2))
    g = nb.knn_graph(nb.pairwise_distances(matrix_from(X)), 6)
    assert np.all(np.diff(g.distances, axis=1) >= 0)


def test_knn_k_too_large():
    D = nb.pairwise_distances(matrix_from([[0.0], [1.0], [2.0]]))
    with pytest.raises(KTooLarge):
        nb.knn_graph(D, 3)


def test_gaussian_affinity_values():
    D = nb.pairwise_distances(matrix_from([[0.0], [0.0], [2.0]]))
    W = nb.gaussian_affinity(D, sigma=2.0)
    assert W.values[0, 1] == 1.0          # d = 0
    assert W.values[0, 2] == pytest.approx(math.exp(-0.5), abs=1e-15)  # d = sigma
    assert np.all(np.diag(W.values) == 0)


def test_gaussian_affinity_symmetric(rng):
    X = rng.normal(size=(12, 3))
    D = nb.pairwise_distances(matrix_from(X))
    W = nb.gaussian_affinity(D, 1.5, sparsify=nb.knn_graph(D, 3))
    assert np.array_equal(W.values, W.values.T)
    assert W.values.max() <= 1.0 and W.values.min() >= 0.0


def test_gaussian_affinity_bad_sigma():
    D = nb.pairwise_distances(matrix_from([[0.0], [1.0]]))
    with pytest.raises(NonPositiveSigma):
        nb.gaussian_affinity(D, 0.0)


def test_alpha_decay_at_bandwidth():
    # three points where d(0,1) equals both endpoints' k-th neighbor distance
    D = nb.pairwise_distances(matrix_from([[0.0], [1.0], [-1.0]]))
    g = nb.knn_graph(D, 2)
    W = nb.alpha_decay_kernel(D, g, alpha=2.0)
    eps0, eps1 = g.distances[0, -1], g.distances[1, -1]
    d01 = D.values[0, 1]
    expected = 0.5 * (math.exp(-((d01 / eps0) ** 2)) + math.exp(-((d01 / eps1) ** 2)))
    assert W.values[0, 1] == pytest.approx(expected, abs=1e-15)


def test_alpha_decay_exact_bandwidth_weight():
    # equilateral triangle: every pair sits exactly at the shared bandwidth
    X = matrix_from([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    D = nb.pairwise_distances(X)
    g = nb.knn_graph(D, 2)
    W = nb.alpha_decay_kernel(D, g, alpha=3.0)
    assert W.values[0, 1] == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_alpha_decay_large_alpha_inside_bandwidth():
    D = nb.pairwise_distances(matrix_from([[0.0], [0.5], [1.0], [5.0]]))
    g = nb.knn_graph(D, 3)
    W = nb.alpha_decay_kernel(D, g, alpha=500.0)
    # d(0,1) is well inside both bandwidths, so the weight saturates at 1
    assert W.values[0, 1] == pytest.approx(1.0, abs=1e-12)


def test_alpha_decay_symmetry(rng):
    X = rng.normal(size=(14, 3))
    D = nb.pairwise_distances(matrix_from(X))
    W = nb.alpha_decay_kernel(D, nb.knn_graph(D, 4), alpha=10.0)
    assert np.abs(W.values - W.values.T).max() <= 1e-15
    assert np.all(np.diag(W.values) == 1.0)


def test_alpha_decay_zero_bandwidth():
    D = nb.pairwise_distances(matrix_from([[0.0], [0.0], [0.0], [1.0]]))
    with pytest.raises(ZeroBandwidth):
        nb.alpha_decay_kernel(D, nb.knn_graph(D, 2), alpha=2.0)


def test_components_complete_graph(rng):
    X = rng.normal(size=(8, 2))
    g = nb.knn_graph(nb.pairwise_distances(matrix_from(X)), 7)
    assert nb.connected_components(g).max() == 0


def test_components_two_clusters():
    cluster = np.arange(5, dtype=float).reshape(5, 1) * 0.01
    X = np.vstack([cluster, cluster + 1000.0])
    g = nb.knn_graph(nb.pairwise_distances(matrix_from(X)), 2)
    labels = nb.connected_components(g)
    assert labels.max() == 1
    assert set(labels[:5]) == {0} and set(labels[5:]) == {1}


def test_components_singleton():
    adj = np.zeros((1, 1), dtype=bool)
    assert nb.components_from_adjacency(adj).tolist() == [0]
