"""Pairwise distances, kNN graphs, and affinity kernels.

Everything here is deterministic: kNN ties break toward the smaller index,
and distances are computed row by row so D[i, j] and D[j, i] come out
bitwise equal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .dataset import EmbeddingMatrix
from .errors import FormatError, KTooLarge, NonPositiveSigma, ZeroBandwidth, ZeroNormRow


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric non-negative n x n distances with zero diagonal."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise FormatError(f"distance matrix must be square, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise FormatError("distance matrix contains NaN or Inf")
        if np.any(v < 0):
            raise FormatError("distance matrix has negative entries")
        if np.any(np.diag(v) != 0):
            raise FormatError("distance matrix has nonzero diagonal")
        if not np.array_equal(v, v.T):
            raise FormatError("distance matrix is not symmetric")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class KnnGraph:
    """For each point, its k nearest other points with ascending distances."""

    indices: np.ndarray   # (n, k) int
    distances: np.ndarray  # (n, k) float, ascending per row

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        dst = np.asarray(self.distances, dtype=np.float64)
        if idx.shape != dst.shape or idx.ndim != 2:
            raise FormatError("kNN indices and distances must share an (n, k) shape")
        if np.any(idx == np.arange(idx.shape[0])[:, None]):
            raise FormatError("kNN graph contains self-loops")
        if np.any(np.diff(dst, axis=1) < 0):
            raise FormatError("kNN distances must ascend within each row")
        idx.flags.writeable = False
        dst.flags.writeable = False
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "distances", dst)

    @property
    def n(self) -> int:
        return self.indices.shape[0]

    @property
    def k(self) -> int:
        return self.indices.shape[1]

    def union_adjacency(self) -> np.ndarray:
        """Boolean symmetric adjacency: edge kept if either endpoint picks it."""
        n = self.n
        adj = np.zeros((n, n), dtype=bool)
        rows = np.repeat(np.arange(n), self.k)
        adj[rows, self.indices.ravel()] = True
        return adj | adj.T


@dataclass(frozen=True)
class AffinityMatrix:
    """Non-negative edge weights; symmetric when the flag says so."""

    values: np.ndarray
    symmetric: bool = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise FormatError(f"affinity matrix must be square, got {v.shape}")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise FormatError("affinities must be finite and non-negative")
        if self.symmetric and not np.array_equal(v, v.T):
            raise FormatError("affinity matrix flagged symmetric is not")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def pairwise_distances(X: EmbeddingMatrix | np.ndarray, metric: str = "euclidean") -> DistanceMatrix:
    """Exact dense pairwise distances, euclidean or cosine."""
    V = X.values if isinstance(X, EmbeddingMatrix) else np.asarray(X, dtype=np.float64)
    n = V.shape[0]
    if metric == "euclidean":
        D = np.empty((n, n))
        for i in range(n):
            # same per-feature squares and summation order for (i,j) and (j,i)
            D[i] = np.sqrt(np.sum((V[i] - V) ** 2, axis=1))
    elif metric == "cosine":
        norms = np.sqrt(np.sum(V**2, axis=1))
        zero = np.flatnonzero(norms == 0)
        if zero.size:
            raise ZeroNormRow(f"cosine undefined for zero-norm rows {zero[:5].tolist()}")
        U = V / norms[:, None]
        D = np.empty((n, n))
        for i in range(n):
            D[i] = 1.0 - U @ U[i]
        D = np.maximum(D, 0.0)
        D = np.maximum(D, D.T)  # exact symmetry against BLAS rounding
    else:
        raise FormatError(f"unknown metric {metric!r}")
    np.fill_diagonal(D, 0.0)
    return DistanceMatrix(values=D)


def knn_graph(D: DistanceMatrix, k: int) -> KnnGraph:
    """k nearest neighbors per point; ties break toward the smaller index."""
    n = D.n
    if not 1 <= k <= n - 1:
        raise KTooLarge(f"k={k} outside [1, {n - 1}]")
    work = D.values.copy()
    np.fill_diagonal(work, np.inf)
    order = np.argsort(work, axis=1, kind="stable")[:, :k]
    dists = np.take_along_axis(work, order, axis=1)
    return KnnGraph(indices=order, distances=dists)


def gaussian_affinity(D: DistanceMatrix, sigma: float, sparsify: KnnGraph | None = None) -> AffinityMatrix:
    """w(i,j) = exp(-d^2 / 2 sigma^2), optionally restricted to union-kNN edges."""
    if sigma <= 0:
        raise NonPositiveSigma(f"sigma must be positive, got {sigma}")
    W = np.exp(-(D.values**2) / (2.0 * sigma * sigma))
    if sparsify is not None:
        mask = sparsify.union_adjacency()
        W = np.where(mask, W, 0.0)
        W = np.maximum(W, W.T)
    np.fill_diagonal(W, 0.0)
    return AffinityMatrix(values=W, symmetric=True)


def alpha_decay_kernel(D: DistanceMatrix, knn: KnnGraph, alpha: float = 40.0) -> AffinityMatrix:
    """Adaptive-bandwidth decay kernel averaged over both endpoint bandwidths.

    Bandwidth eps_i is the distance to i's k-th neighbor;
    w(i,j) = (exp(-(d/eps_i)^alpha) + exp(-(d/eps_j)^alpha)) / 2.
    """
    if alpha < 1:
        raise FormatError(f"alpha must be >= 1, got {alpha}")
    if knn.k < 2:
        raise KTooLarge("alpha-decay kernel needs k >= 2")
    eps = knn.distances[:, -1]
    zero = np.flatnonzero(eps == 0)
    if zero.size:
        raise ZeroBandwidth(f"duplicate points give zero bandwidth at rows {zero[:5].tolist()}")
    ratio_i = D.values / eps[:, None]
    with np.errstate(over="ignore"):
        decay = np.exp(-np.power(ratio_i, alpha))
    W = 0.5 * (decay + decay.T)
    return AffinityMatrix(values=W, symmetric=True)


def connected_components(graph: KnnGraph) -> np.ndarray:
    """Component label per node, BFS over undirected edges from node 0 up."""
    return components_from_adjacency(graph.union_adjacency())


def components_from_adjacency(adj: np.ndarray) -> np.ndarray:
    """BFS component labels for a boolean or weighted symmetric adjacency."""
    n = adj.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    current = 0
    for start in range(n):
        if labels[start] != -1:
            continue
        labels[start] = current
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in np.flatnonzero(adj[u]):
                if labels[v] == -1:
                    labels[v] = current
                    queue.append(v)
        current += 1
    return labels


def component_sizes(labels: np.ndarray) -> list[int]:
    return np.bincount(labels).tolist()
