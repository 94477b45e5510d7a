import numpy as np
import pytest

from manifoldkit import linalg as la
from manifoldkit.errors import NonSymmetric, ShapeMismatch
from oracles import jacobi_eigh


def test_identity_smallest_two():
    r = la.symmetric_eigen(np.eye(3), 2, "smallest")
    assert np.allclose(r.eigenvalues, [1.0, 1.0])


def test_diagonal_largest_one():
    r = la.symmetric_eigen(np.diag([1.0, 2.0, 3.0]), 1, "largest")
    assert r.eigenvalues[0] == pytest.approx(3.0, abs=1e-14)
    assert np.allclose(np.abs(r.eigenvectors[:, 0]), [0, 0, 1], atol=1e-14)
    assert r.eigenvectors[2, 0] > 0  # sign convention


def test_residuals_random_symmetric(rng):
    A = rng.normal(size=(10, 10))
    A = 0.5 * (A + A.T)
    r = la.symmetric_eigen(A, 10, "smallest")
    for lam, v in zip(r.eigenvalues, r.eigenvectors.T):
        assert np.abs(A @ v - lam * v).max() <= 1e-8
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_eigen_matches_jacobi_oracle(rng):
    A = rng.normal(size=(8, 8))
    A = 0.5 * (A + A.T)
    r = la.symmetric_eigen(A, 8, "smallest")
    w_oracle, _ = jacobi_eigh(A)
    assert np.abs(r.eigenvalues - w_oracle).max() <= 1e-10


def test_eigen_orthonormal(rng):
    A = rng.normal(size=(12, 12))
    A = 0.5 * (A + A.T)
    r = la.symmetric_eigen(A, 12, "smallest")
    V = r.eigenvectors
    assert np.abs(V.T @ V - np.eye(12)).max() <= 1e-8
    assert np.all(np.diff(r.eigenvalues) >= -1e-12)


def test_eigen_rejects_nonsymmetric():
    with pytest.raises(NonSymmetric):
        la.symmetric_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]), 1)


def test_double_center_zero():
    assert np.array_equal(la.double_center(np.zeros((4, 4))), np.zeros((4, 4)))


def test_double_center_two_points():
    D2 = np.array([[0.0, 4.0], [4.0, 0.0]])  # squared distance 4
    B = la.double_center(D2)
    assert np.allclose(B, [[1.0, -1.0], [-1.0, 1.0]], atol=1e-14)


def test_double_center_row_sums(rng):
    X = rng.normal(size=(9, 4))
    D2 = np.sum((X[:, None] - X[None, :]) ** 2, axis=2)
    B = la.double_center(D2)
    assert np.abs(B.sum(axis=1)).max() <= 1e-9
    assert np.array_equal(B, B.T)


def test_double_center_bitwise_stable(rng):
    D2 = np.abs(rng.normal(size=(7, 7)))
    D2 = 0.5 * (D2 + D2.T)
    np.fill_diagonal(D2, 0.0)
    assert np.array_equal(la.double_center(D2), la.double_center(D2))


def test_procrustes_rotation_invariance(rng):
    X = rng.normal(size=(20, 2))
    R = np.array([[0.0, -1.0], [1.0, 0.0]])  # 90 degrees
    assert la.procrustes_error(X, X @ R.T) <= 1e-12


def test_procrustes_similarity_invariance(rng):
    X = rng.normal(size=(15, 2))
    Y = 2.0 * X + np.array([3.0, -1.0])
    assert la.procrustes_error(X, Y) <= 1e-12


def test_procrustes_reflection_invariance(rng):
    X = rng.normal(size=(10, 2))
    Y = X.copy()
    Y[:, 0] = -Y[:, 0]
    assert la.procrustes_error(X, Y) <= 1e-12


def test_procrustes_perturbation_bound(rng):
    X = rng.normal(size=(25, 2))
    for eps in (1e-3, 1e-6):
        noise = rng.normal(size=(25, 2))
        noise = eps * noise / np.linalg.norm(noise, axis=1, keepdims=True)
        assert la.procrustes_error(X, X + noise) <= eps


def test_procrustes_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        la.procrustes_error(np.zeros((3, 2)), np.zeros((4, 2)))
