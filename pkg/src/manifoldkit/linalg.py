"""Shared numerical kernels: symmetric eigensolves, double centering,
Procrustes alignment error."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormatError, NonSymmetric, ShapeMismatch

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class EigenResult:
    """Eigenpairs in ascending eigenvalue order, one column per vector.

    Vectors are unit-norm with the largest-magnitude component positive so
    repeated runs agree bitwise.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        pivot = np.argmax(np.abs(out[:, j]))
        if out[pivot, j] < 0:
            out[:, j] = -out[:, j]
    return out


def symmetric_eigen(A: np.ndarray, count: int, side: str = "smallest") -> EigenResult:
    """Extreme eigenpairs of a symmetric matrix, in ascending order."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise FormatError(f"need a square matrix, got {A.shape}")
    n = A.shape[0]
    if not 1 <= count <= n:
        raise FormatError(f"count={count} outside [1, {n}]")
    scale = max(1.0, np.abs(A).max())
    if np.abs(A - A.T).max() > SYMMETRY_TOL * scale:
        raise NonSymmetric("matrix is not symmetric to 1e-10 (relative)")
    A = 0.5 * (A + A.T)
    w, V = np.linalg.eigh(A)
    if side == "smallest":
        w, V = w[:count], V[:, :count]
    elif side == "largest":
        w, V = w[n - count:], V[:, n - count:]
    else:
        raise FormatError(f"side must be 'smallest' or 'largest', got {side!r}")
    return EigenResult(eigenvalues=w, eigenvectors=fix_signs(V))


def double_center(D2: np.ndarray) -> np.ndarray:
    """Gram matrix B = -1/2 J D2 J from squared distances, J = I - 11^T/n."""
    D2 = np.asarray(D2, dtype=np.float64)
    row_mean = D2.mean(axis=1, keepdims=True)
    col_mean = D2.mean(axis=0, keepdims=True)
    grand = D2.mean()
    B = -0.5 * (D2 - row_mean - col_mean + grand)
    return 0.5 * (B + B.T)


def procrustes_error(X: np.ndarray, Y: np.ndarray) -> float:
    """Minimal RMS misfit of Y to X over translation, rotation/reflection,
    and uniform scaling."""
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if X.shape != Y.shape:
        raise ShapeMismatch(f"shapes differ: {X.shape} vs {Y.shape}")
    if X.shape[0] < 2:
        raise ShapeMismatch("need at least 2 points")
    n = X.shape[0]
    Xc = X - X.mean(axis=0)
    Yc = Y - Y.mean(axis=0)
    normY2 = np.sum(Yc**2)
    if normY2 == 0.0:
        return float(np.sqrt(np.sum(Xc**2) / n))
    A = Yc.T @ Xc
    U, s, Vt = np.linalg.svd(A)
    R = U @ Vt
    scale = s.sum() / normY2
    resid = scale * (Yc @ R) - Xc
    return float(np.sqrt(np.sum(resid**2) / n))
