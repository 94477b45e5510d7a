"""Laplacian Eigenmaps and Locally Linear Embedding."""

from __future__ import annotations

import numpy as np

from .dataset import EmbeddingMatrix
from .embedding import Embedding2D
from .errors import (
    DisconnectedGraph,
    KTooLarge,
    SingularLocalGram,
    ZeroDegreeNode,
)
from .linalg import fix_signs
from .neighbors import (
    AffinityMatrix,
    component_sizes,
    components_from_adjacency,
    knn_graph,
    pairwise_distances,
)

TRIVIAL_EIGENVALUE_REL_TOL = 1e-9


def laplacian_eigenmaps(W: AffinityMatrix, m: int = 2) -> Embedding2D:
    """Embed via the smallest nontrivial generalized eigenvectors of L y = lam Dg y.

    Solved through the symmetric normalization Dg^{-1/2} L Dg^{-1/2}; the
    trivial constant eigenpair (lam ~ 0) is discarded and each returned
    column is mapped back by Dg^{-1/2} and normalized to unit length.
    """
    A = W.values
    n = A.shape[0]
    labels = components_from_adjacency(A > 0)
    if labels.max() > 0:
        raise DisconnectedGraph(component_sizes(labels))
    deg = A.sum(axis=1)
    if np.any(deg <= 0):
        raise ZeroDegreeNode(f"zero-degree nodes: {np.flatnonzero(deg <= 0)[:5].tolist()}")
    d_isqrt = 1.0 / np.sqrt(deg)
    # Lsym = I - Dg^{-1/2} W Dg^{-1/2}
    Lsym = -A * d_isqrt[:, None] * d_isqrt[None, :]
    Lsym[np.diag_indices(n)] += 1.0
    Lsym = 0.5 * (Lsym + Lsym.T)
    w, V = np.linalg.eigh(Lsym)
    lam_max = max(abs(w[0]), abs(w[-1]))
    nontrivial = np.flatnonzero(np.abs(w) > TRIVIAL_EIGENVALUE_REL_TOL * lam_max)
    take = nontrivial[:m]
    if take.size < m:
        raise DisconnectedGraph(component_sizes(labels))
    Y = V[:, take] * d_isqrt[:, None]
    Y = Y / np.sqrt(np.sum(Y**2, axis=0, keepdims=True))
    Y = fix_signs(Y)
    return Embedding2D(
        coords=Y,
        algorithm="laplacian_eigenmaps",
        params={"m": m},
        extras={"eigenvalues": w[take].copy(), "trivial_eigenvalue": float(w[0])},
    )


def lle_weights(X: np.ndarray, indices: np.ndarray, reg: float) -> np.ndarray:
    """Per-point affine reconstruction weights over the kNN neighborhoods.

    Solves min ||x_i - sum_j w_ij x_j||^2 subject to sum_j w_ij = 1 via the
    local Gram matrix, ridge-regularized by reg * trace(C) / k.
    """
    n, k = indices.shape
    W = np.zeros((n, k))
    ones = np.ones(k)
    for i in range(n):
        Z = X[indices[i]] - X[i]
        C = Z @ Z.T
        C = 0.5 * (C + C.T)
        trace = np.trace(C)
        if reg > 0 and trace > 0:
            C[np.diag_indices(k)] += reg * trace / k
        elif reg > 0:
            C[np.diag_indices(k)] += reg
        try:
            w = np.linalg.solve(C, ones)
        except np.linalg.LinAlgError as e:
            raise SingularLocalGram(f"singular local Gram at point {i} (reg={reg})") from e
        total = w.sum()
        if total == 0 or not np.all(np.isfinite(w)):
            raise SingularLocalGram(f"degenerate weight solve at point {i} (reg={reg})")
        W[i] = w / total
    return W


def lle(X: EmbeddingMatrix, k: int, m: int = 2, reg: float = 1e-3) -> Embedding2D:
    """Locally Linear Embedding: reconstruction weights, then the smallest
    nontrivial eigenvectors of (I - W)^T (I - W)."""
    V = X.values
    n = V.shape[0]
    if not 1 <= k <= n - 1:
        raise KTooLarge(f"k={k} outside [1, {n - 1}]")
    graph = knn_graph(pairwise_distances(X), k)
    W = lle_weights(V, graph.indices, reg)

    Wfull = np.zeros((n, n))
    np.put_along_axis(Wfull, graph.indices, W, axis=1)
    IW = np.eye(n) - Wfull
    M = IW.T @ IW
    M = 0.5 * (M + M.T)
    w, Vec = np.linalg.eigh(M)
    # index 0 is the constant vector (eigenvalue ~ 0 by the row-sum constraint)
    Y = fix_signs(Vec[:, 1:m + 1])
    recon_err = float(np.sum((IW @ V) ** 2))
    return Embedding2D(
        coords=Y,
        algorithm="lle",
        params={"k": k, "m": m, "reg": reg},
        sample_ids=X.sample_ids,
        extras={"reconstruction_error": recon_err, "eigenvalues": w[1:m + 1].copy()},
    )
