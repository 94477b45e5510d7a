"""Embedding-quality metrics: trustworthiness, continuity, neighborhood
label agreement, silhouette."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, asdict

import numpy as np

from .errors import KTooLarge, ShapeMismatch, SingleClass
from .neighbors import pairwise_distances


@dataclass(frozen=True)
class QualityReport:
    trustworthiness: float
    continuity: float
    knn_label_agreement: float
    silhouette: float
    k: int
    label_column: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def to_text(self) -> str:
        rows = [
            ("trustworthiness", f"{self.trustworthiness:.6f}"),
            ("continuity", f"{self.continuity:.6f}"),
            ("knn_label_agreement", f"{self.knn_label_agreement:.6f}"),
            ("silhouette", f"{self.silhouette:.6f}"),
            ("k", str(self.k)),
            ("label_column", self.label_column),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows)


def quality_report_from_json(text: str) -> QualityReport:
    return QualityReport(**json.loads(text))


def _coords(obj) -> np.ndarray:
    for attr in ("coords", "values"):
        if hasattr(obj, attr):
            return getattr(obj, attr)
    return np.asarray(obj, dtype=np.float64)


def _neighbor_order(D: np.ndarray) -> np.ndarray:
    """Per-row neighbor ordering by distance, self excluded, ties by index."""
    work = D.copy()
    np.fill_diagonal(work, np.inf)
    return np.argsort(work, axis=1, kind="stable")


def _rank_matrix(order: np.ndarray) -> np.ndarray:
    """ranks[i, j] = 1-based rank of j among i's neighbors."""
    n = order.shape[0]
    ranks = np.empty((n, n), dtype=np.int64)
    rows = np.arange(n)[:, None]
    ranks[rows, order] = np.arange(1, n + 1)[None, :]
    return ranks


def _trust_core(D_true: np.ndarray, D_emb: np.ndarray, k: int) -> float:
    """Penalize embedding neighbors that are not true neighbors, weighted by
    their true-space rank excess over k."""
    n = D_true.shape[0]
    if not 1 <= k < n / 2:
        raise KTooLarge(f"k={k} must satisfy 1 <= k < n/2 = {n / 2}")
    order_true = _neighbor_order(D_true)
    order_emb = _neighbor_order(D_emb)
    ranks_true = _rank_matrix(order_true)
    penalty = 0
    for i in range(n):
        true_set = set(order_true[i, :k].tolist())
        for j in order_emb[i, :k]:
            if j not in true_set:
                penalty += ranks_true[i, j] - k
    return 1.0 - (2.0 / (n * k * (2 * n - 3 * k - 1))) * penalty


def trustworthiness(X, Y, k: int) -> float:
    """1 when every embedding neighborhood contains only true neighbors."""
    Xv, Yv = _coords(X), _coords(Y)
    if Xv.shape[0] != Yv.shape[0]:
        raise ShapeMismatch(f"{Xv.shape[0]} vs {Yv.shape[0]} samples")
    return _trust_core(pairwise_distances(Xv).values, pairwise_distances(Yv).values, k)


def continuity(X, Y, k: int) -> float:
    """Counterpart of trustworthiness with the spaces' roles swapped."""
    Xv, Yv = _coords(X), _coords(Y)
    if Xv.shape[0] != Yv.shape[0]:
        raise ShapeMismatch(f"{Xv.shape[0]} vs {Yv.shape[0]} samples")
    return _trust_core(pairwise_distances(Yv).values, pairwise_distances(Xv).values, k)


def knn_label_agreement(Y, labels, k: int) -> float:
    """Mean fraction of each point's k embedding neighbors sharing its label."""
    Yv = _coords(Y)
    labels = np.asarray(labels)
    n = Yv.shape[0]
    if labels.shape[0] != n:
        raise ShapeMismatch(f"{labels.shape[0]} labels for {n} samples")
    if not 1 <= k <= n - 1:
        raise KTooLarge(f"k={k} outside [1, {n - 1}]")
    if np.unique(labels).size < 2:
        warnings.warn("only one class present; agreement is trivially 1.0", RuntimeWarning,
                      stacklevel=2)
        return 1.0
    order = _neighbor_order(pairwise_distances(Yv).values)[:, :k]
    same = labels[order] == labels[:, None]
    return float(same.mean())


def silhouette(Y, labels) -> float:
    """Mean (b - a) / max(a, b); singleton classes and 0/0 score 0."""
    Yv = _coords(Y)
    labels = np.asarray(labels)
    n = Yv.shape[0]
    if labels.shape[0] != n:
        raise ShapeMismatch(f"{labels.shape[0]} labels for {n} samples")
    classes, inverse = np.unique(labels, return_inverse=True)
    if classes.size < 2:
        raise SingleClass("silhouette needs at least two classes")
    D = pairwise_distances(Yv).values
    counts = np.bincount(inverse, minlength=classes.size)
    # sums[i, c] = total distance from i to class c
    sums = np.zeros((n, classes.size))
    for c in range(classes.size):
        sums[:, c] = D[:, inverse == c].sum(axis=1)
    scores = np.zeros(n)
    for i in range(n):
        c = inverse[i]
        if counts[c] == 1:
            continue
        a = sums[i, c] / (counts[c] - 1)
        b = np.inf
        for other in range(classes.size):
            if other != c:
                b = min(b, sums[i, other] / counts[other])
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


def quality_report(X, Y, labels, k: int, label_column: str = "label") -> QualityReport:
    return QualityReport(
        trustworthiness=trustworthiness(X, Y, k),
        continuity=continuity(X, Y, k),
        knn_label_agreement=knn_label_agreement(Y, labels, k),
        silhouette=silhouette(Y, labels),
        k=k,
        label_column=label_column,
    )
