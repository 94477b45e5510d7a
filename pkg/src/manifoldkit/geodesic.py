"""ISOMAP, classical MDS, and SMACOF stress majorization."""

from __future__ import annotations

import warnings

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .dataset import EmbeddingMatrix
from .embedding import Embedding2D
from .errors import DisconnectedGraph, FormatError, NumericalOverflow
from .linalg import double_center, fix_signs
from .neighbors import (
    DistanceMatrix,
    KnnGraph,
    component_sizes,
    connected_components,
    knn_graph,
    pairwise_distances,
)
from .rng import SplitMix64

NEGATIVE_EIGENVALUE_WARN_REL = 1e-8
SMACOF_MIN_SEPARATION = 1e-15


def geodesic_distances(graph: KnnGraph) -> DistanceMatrix:
    """All-pairs shortest paths over the undirected union kNN graph."""
    labels = connected_components(graph)
    if labels.max() > 0:
        raise DisconnectedGraph(component_sizes(labels))
    n = graph.n
    rows = np.repeat(np.arange(n), graph.k)
    cols = graph.indices.ravel()
    data = graph.distances.ravel()
    adj = csr_matrix((data, (rows, cols)), shape=(n, n))
    adj = adj.maximum(adj.T)
    G = dijkstra(adj, directed=False)
    G = np.minimum(G, G.T)  # exact symmetry against per-source rounding
    np.fill_diagonal(G, 0.0)
    return DistanceMatrix(values=G)


def classical_mds(D: DistanceMatrix | np.ndarray, m: int = 2) -> Embedding2D:
    """Torgerson MDS: eigendecompose the double-centered squared distances."""
    Dv = D.values if isinstance(D, DistanceMatrix) else np.asarray(D, dtype=np.float64)
    B = double_center(Dv**2)
    w, V = np.linalg.eigh(B)
    # largest m eigenvalues, descending
    w = w[::-1][:m].copy()
    V = V[:, ::-1][:, :m]
    lam_max = max(w[0], 0.0)
    negative = w[w < 0]
    if negative.size and lam_max > 0 and np.abs(negative).max() > NEGATIVE_EIGENVALUE_WARN_REL * lam_max:
        warnings.warn(
            f"classical MDS clamped negative eigenvalues (largest magnitude "
            f"{np.abs(negative).max():.3e}); distances are not exactly euclidean",
            RuntimeWarning,
            stacklevel=2,
        )
    w = np.maximum(w, 0.0)
    Y = fix_signs(V) * np.sqrt(w)[None, :]
    return Embedding2D(coords=Y, algorithm="classical_mds", params={"m": m},
                       extras={"eigenvalues": w})


def isomap(X: EmbeddingMatrix, k: int, m: int = 2) -> Embedding2D:
    """Classical MDS on kNN-graph geodesic distances."""
    D = pairwise_distances(X)
    G = geodesic_distances(knn_graph(D, k))
    result = classical_mds(G, m)
    return Embedding2D(coords=result.coords, algorithm="isomap",
                       params={"k": k, "m": m}, sample_ids=X.sample_ids,
                       extras=result.extras)


def smacof_mds(
    D: DistanceMatrix | np.ndarray,
    m: int = 2,
    max_iter: int = 300,
    eps: float = 1e-6,
    seed: int = 0,
    init: np.ndarray | None = None,
) -> Embedding2D:
    """Metric MDS by Guttman-transform majorization of raw stress.

    Starts from `init` when given, else uniform [-1, 1]^m from the seeded
    generator.  Stress is recorded per iteration and never increases.
    """
    Dv = D.values if isinstance(D, DistanceMatrix) else np.asarray(D, dtype=np.float64)
    n = Dv.shape[0]
    if max_iter < 1:
        raise FormatError(f"max_iter must be >= 1, got {max_iter}")
    if init is not None:
        Y = np.array(init, dtype=np.float64)
        if Y.shape != (n, m):
            raise FormatError(f"init shape {Y.shape} != ({n}, {m})")
    else:
        Y = SplitMix64(seed).uniforms((n, m)) * 2.0 - 1.0

    if n == 1:
        return Embedding2D(coords=np.zeros((1, m)), algorithm="smacof",
                           params={"m": m, "max_iter": max_iter, "eps": eps}, seed=seed,
                           extras={"stress": [0.0]})

    def embedded_distances(Y):
        E = np.empty((n, n))
        for i in range(n):
            E[i] = np.sqrt(np.sum((Y[i] - Y) ** 2, axis=1))
        return E

    def stress(E):
        # both diagonals are zero, so 0.5 * full sum = sum over i < j
        diff = Dv - E
        return 0.5 * float(np.sum(diff * diff))

    trace = []
    E = embedded_distances(Y)
    sigma = stress(E)
    trace.append(sigma)
    for _ in range(max_iter):
        # Guttman transform: Y <- (1/n) B(Y) Y
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(E > SMACOF_MIN_SEPARATION, Dv / E, 0.0)
        np.fill_diagonal(ratio, 0.0)
        B = -ratio
        B[np.diag_indices(n)] = ratio.sum(axis=1)
        Y = (B @ Y) / n
        if not np.all(np.isfinite(Y)):
            raise NumericalOverflow("SMACOF iterate became non-finite")
        E = embedded_distances(Y)
        new_sigma = stress(E)
        trace.append(new_sigma)
        if sigma > 0 and (sigma - new_sigma) / sigma < eps:
            sigma = new_sigma
            break
        sigma = new_sigma

    Y = Y - Y.mean(axis=0)
    return Embedding2D(
        coords=Y,
        algorithm="smacof",
        params={"m": m, "max_iter": max_iter, "eps": eps},
        seed=seed,
        extras={"stress": trace},
    )


def normalized_stress(D: DistanceMatrix | np.ndarray, Y: np.ndarray) -> float:
    """Raw stress divided by the total squared dissimilarity, in [0, 1]-ish."""
    Dv = D.values if isinstance(D, DistanceMatrix) else np.asarray(D, dtype=np.float64)
    n = Dv.shape[0]
    E = np.empty((n, n))
    for i in range(n):
        E[i] = np.sqrt(np.sum((Y[i] - Y) ** 2, axis=1))
    iu = np.triu_indices(n, 1)
    denom = float(np.sum(Dv[iu] ** 2))
    if denom == 0:
        return 0.0
    return float(np.sum((Dv[iu] - E[iu]) ** 2)) / denom
