"""Exact t-SNE: perplexity calibration and momentum gradient descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import Embedding2D
from .errors import CalibrationFailure, FormatError, NumericalOverflow
from .neighbors import DistanceMatrix
from .rng import SplitMix64

PERPLEXITY_TOL = 1e-5
MAX_BISECTION_STEPS = 64
SIGMA_LO = 1e-20
SIGMA_HI = 1e20
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class CalibratedAffinities:
    """Symmetric joint probabilities P with per-point bandwidths."""

    P: np.ndarray
    perplexity: float
    sigmas: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=np.float64)
        if np.any(P < 0) or abs(P.sum() - 1.0) > 1e-10 or np.any(np.diag(P) != 0):
            raise FormatError("P must be non-negative with zero diagonal and sum 1")
        if np.abs(P - P.T).max() > 1e-12:
            raise FormatError("P must be symmetric")
        P.flags.writeable = False
        object.__setattr__(self, "P", P)

    @property
    def n(self) -> int:
        return self.P.shape[0]


@dataclass(frozen=True)
class TsneConfig:
    perplexity: float = 30.0
    m: int = 2
    learning_rate: float = 200.0
    momentum_early: float = 0.5
    momentum_late: float = 0.8
    momentum_switch_iter: int = 250
    early_exaggeration: float = 12.0
    exaggeration_iters: int = 250
    max_iter: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.early_exaggeration < 1:
            raise FormatError("early exaggeration factor must be >= 1")
        if self.perplexity <= 1:
            raise FormatError("perplexity must exceed 1")


def _conditional_row(d2_row: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian conditionals over one row of squared distances (self excluded
    by the caller via an inf entry)."""
    logits = -d2_row / (2.0 * sigma * sigma)
    logits -= logits.max()
    p = np.exp(logits)
    return p / p.sum()


def _row_perplexity(p: np.ndarray) -> float:
    nz = p[p > 0]
    h = -np.sum(nz * np.log2(nz))
    return float(2.0**h)


def calibrate_perplexity(D: DistanceMatrix, perplexity: float) -> CalibratedAffinities:
    """Bisect each bandwidth sigma_i (geometrically, over [1e-20, 1e20])
    until the conditional row's 2^entropy matches the target perplexity,
    then symmetrize: P = (P_cond + P_cond^T) / 2n."""
    n = D.n
    if not 1 < perplexity < n:
        raise FormatError(f"perplexity must lie in (1, {n}), got {perplexity}")
    D2 = D.values**2
    Pc = np.zeros((n, n))
    sigmas = np.empty(n)
    for i in range(n):
        d2 = D2[i].copy()
        d2[i] = np.inf  # excludes self: exp(-inf) = 0
        lo, hi = SIGMA_LO, SIGMA_HI
        sigma = 1.0
        p = _conditional_row(d2, sigma)
        converged = False
        for _ in range(MAX_BISECTION_STEPS):
            perp = _row_perplexity(p)
            if abs(perp - perplexity) <= PERPLEXITY_TOL:
                converged = True
                break
            if perp > perplexity:
                hi = sigma
            else:
                lo = sigma
            sigma = float(np.sqrt(lo * hi))
            p = _conditional_row(d2, sigma)
        if not converged and abs(_row_perplexity(p) - perplexity) > PERPLEXITY_TOL:
            raise CalibrationFailure(
                f"row {i}: 2^H={_row_perplexity(p):.6f} never reached perplexity {perplexity}"
            )
        Pc[i] = p
        sigmas[i] = sigma
    P = (Pc + Pc.T) / (2.0 * n)
    np.fill_diagonal(P, 0.0)
    return CalibratedAffinities(P=P, perplexity=perplexity, sigmas=sigmas)


def _student_t_q(Y: np.ndarray):
    """Unnormalized student-t weights W, their sum Z, and Q = W / Z."""
    n = Y.shape[0]
    sq = np.sum(Y**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (Y @ Y.T)
    np.maximum(d2, 0.0, out=d2)
    W = 1.0 / (1.0 + d2)
    np.fill_diagonal(W, 0.0)
    Z = W.sum()
    return W, Z, W / Z


def kl_divergence(P: np.ndarray, Y: np.ndarray) -> float:
    """KL(P || Q) under the student-t map kernel, probabilities floored at
    1e-12 before the log."""
    _, _, Q = _student_t_q(Y)
    mask = ~np.eye(P.shape[0], dtype=bool)
    p = np.maximum(P[mask], PROB_FLOOR)
    q = np.maximum(Q[mask], PROB_FLOOR)
    return float(np.sum(p * (np.log(p) - np.log(q))))


def tsne_gradient(P: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Exact gradient of KL(P || Q): dC/dy_i = 4 sum_j (p-q) w (y_i - y_j)."""
    W, Z, Q = _student_t_q(Y)
    PQ = (P - Q) * W
    grad = 4.0 * ((np.diag(PQ.sum(axis=1)) - PQ) @ Y)
    return grad


def tsne_embed(affinities: CalibratedAffinities, cfg: TsneConfig = TsneConfig()) -> Embedding2D:
    """Momentum gradient descent with early exaggeration; records KL(P||Q)
    against the true (unexaggerated) P every iteration."""
    P = affinities.P
    n = affinities.n
    Y = SplitMix64(cfg.seed).gaussians((n, cfg.m)) * 1e-4
    velocity = np.zeros_like(Y)
    kl_trace = []
    for it in range(cfg.max_iter):
        exaggerated = it < cfg.exaggeration_iters
        P_eff = P * cfg.early_exaggeration if exaggerated else P
        grad = tsne_gradient(P_eff, Y)
        momentum = cfg.momentum_early if it < cfg.momentum_switch_iter else cfg.momentum_late
        velocity = momentum * velocity - cfg.learning_rate * grad
        Y = Y + velocity
        if not np.all(np.isfinite(Y)):
            raise NumericalOverflow(f"t-SNE diverged at iteration {it}; lower the learning rate")
        kl_trace.append(kl_divergence(P, Y))
    Y = Y - Y.mean(axis=0)
    return Embedding2D(
        coords=Y,
        algorithm="tsne",
        params={
            "perplexity": cfg.perplexity,
            "m": cfg.m,
            "learning_rate": cfg.learning_rate,
            "early_exaggeration": cfg.early_exaggeration,
            "exaggeration_iters": cfg.exaggeration_iters,
            "max_iter": cfg.max_iter,
        },
        seed=cfg.seed,
        extras={
            "kl_trace": kl_trace,
            "kl_end_of_exaggeration": kl_trace[min(cfg.exaggeration_iters, cfg.max_iter) - 1]
            if kl_trace
            else None,
        },
    )


def save_loss_trace(trace, path) -> None:
    """Write the per-iteration KL trace as iter,kl CSV."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("iter,kl\n")
        for i, v in enumerate(trace):
            fh.write(f"{i},{float(v)!r}\n")
