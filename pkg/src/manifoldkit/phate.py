"""PHATE: diffusion operator, entropy-based timescale, potential distances,
metric-MDS readout."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import EmbeddingMatrix
from .embedding import Embedding2D
from .errors import DegenerateSpectrum, FormatError, ZeroRowSum
from .geodesic import classical_mds, smacof_mds
from .neighbors import (
    AffinityMatrix,
    DistanceMatrix,
    alpha_decay_kernel,
    knn_graph,
    pairwise_distances,
)

LOG_FLOOR = 1e-7


@dataclass
class DiffusionOperator:
    """Row-stochastic random-walk operator with its symmetric-conjugate
    spectrum and a cache of computed powers."""

    P: np.ndarray
    eigenvalues: np.ndarray
    _powers: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def power(self, t: int) -> np.ndarray:
        """P^t by repeated multiplication, reusing the largest cached power."""
        if t < 1:
            raise FormatError(f"t must be >= 1, got {t}")
        if t == 1:
            return self.P
        if t in self._powers:
            return self._powers[t]
        best = max((s for s in self._powers if s < t), default=1)
        result = self.P if best == 1 else self._powers[best]
        for s in range(best, t):
            result = result @ self.P
            # re-normalize to cancel accumulated rounding drift in the row sums
            result = result / result.sum(axis=1, keepdims=True)
            self._powers[s + 1] = result
        return self._powers[t]


def diffusion_operator(W: AffinityMatrix) -> DiffusionOperator:
    """Row-normalize an affinity matrix; spectrum from Dg^{-1/2} W Dg^{-1/2}."""
    A = W.values
    deg = A.sum(axis=1)
    if np.any(deg <= 0):
        raise ZeroRowSum(f"zero row sums at {np.flatnonzero(deg <= 0)[:5].tolist()}")
    P = A / deg[:, None]
    d_isqrt = 1.0 / np.sqrt(deg)
    S = A * d_isqrt[:, None] * d_isqrt[None, :]
    S = 0.5 * (S + S.T)
    eigenvalues = np.linalg.eigvalsh(S)
    return DiffusionOperator(P=P, eigenvalues=eigenvalues)


def von_neumann_entropy(op: DiffusionOperator, t: int) -> float:
    """Shannon entropy of the normalized spectrum |lambda|^t, zeros skipped."""
    mags = np.abs(op.eigenvalues)
    mags = mags[mags > 0]
    if mags.size == 0:
        raise DegenerateSpectrum("all eigenvalues are zero")
    powered = mags**t
    eta = powered / powered.sum()
    eta = eta[eta > 0]
    return float(-np.sum(eta * np.log(eta)))


def select_t(op: DiffusionOperator, t_max: int = 100) -> int:
    """Knee of the entropy curve H(t): the t farthest from the chord joining
    (1, H(1)) and (t_max, H(t_max))."""
    if t_max < 2:
        raise FormatError(f"t_max must be >= 2, got {t_max}")
    mags = np.abs(op.eigenvalues)
    if np.count_nonzero(mags > 1e-14) <= 1:
        raise DegenerateSpectrum("spectrum has no decaying modes beyond the stationary one")
    ts = np.arange(1, t_max + 1)
    H = np.array([von_neumann_entropy(op, int(t)) for t in ts])
    x1, y1 = float(ts[0]), H[0]
    x2, y2 = float(ts[-1]), H[-1]
    dx, dy = x2 - x1, y2 - y1
    norm = np.hypot(dx, dy)
    if norm == 0:
        return 1
    dist = np.abs(dy * (ts - x1) - dx * (H - y1)) / norm
    return int(ts[int(np.argmax(dist))])


def entropy_curve(op: DiffusionOperator, t_max: int) -> list[tuple[int, float]]:
    return [(t, von_neumann_entropy(op, t)) for t in range(1, t_max + 1)]


def potential_distances(op: DiffusionOperator, t: int) -> DistanceMatrix:
    """Pairwise L2 distances between log-transformed rows of P^t."""
    U = -np.log(op.power(t) + LOG_FLOOR)
    return pairwise_distances(U)


def phate_embed(
    X: EmbeddingMatrix,
    k: int = 5,
    alpha: float = 40.0,
    m: int = 2,
    t: int | None = None,
    seed: int = 0,
    t_max: int = 100,
    mds_max_iter: int = 300,
    mds_eps: float = 1e-9,
) -> Embedding2D:
    """Full PHATE pipeline, SMACOF readout initialized from classical MDS."""
    D = pairwise_distances(X)
    graph = knn_graph(D, k)
    W = alpha_decay_kernel(D, graph, alpha)
    op = diffusion_operator(W)
    chosen_t = t if t is not None else select_t(op, t_max)
    pot = potential_distances(op, chosen_t)
    init = classical_mds(pot, m).coords
    result = smacof_mds(pot, m=m, max_iter=mds_max_iter, eps=mds_eps, seed=seed, init=init)
    return Embedding2D(
        coords=result.coords,
        algorithm="phate",
        params={"k": k, "alpha": alpha, "m": m, "t": chosen_t, "t_max": t_max},
        seed=seed,
        sample_ids=X.sample_ids,
        extras={"stress": result.extras["stress"], "t": chosen_t},
    )
