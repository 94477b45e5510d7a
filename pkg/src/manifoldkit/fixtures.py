"""Seeded synthetic datasets with retained ground truth.

Generation runs entirely on the pinned SplitMix64 stream, so a
(generator, n, noise, seed) tuple is bitwise reproducible anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import AnnotationTable, EmbeddingMatrix, LabeledDataset
from .errors import InvalidSpec
from .rng import SplitMix64

GENERATORS = ("swiss_roll", "gaussian_clusters", "line_1d", "trajectory")


@dataclass(frozen=True)
class SyntheticSpec:
    generator: str
    n: int
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise InvalidSpec(f"unknown generator {self.generator!r}; pick one of {GENERATORS}")
        if self.n < 4:
            raise InvalidSpec(f"n must be >= 4, got {self.n}")
        if self.noise < 0:
            raise InvalidSpec(f"noise must be >= 0, got {self.noise}")


@dataclass(frozen=True)
class SyntheticDataset:
    dataset: LabeledDataset
    ground_truth: np.ndarray  # per-sample parameterization (t, h), arc length, or cluster id


def generate(spec: SyntheticSpec) -> SyntheticDataset:
    rng = SplitMix64(spec.seed)
    if spec.generator == "swiss_roll":
        points, truth, labels = _swiss_roll(spec.n, spec.noise, rng)
    elif spec.generator == "gaussian_clusters":
        points, truth, labels = _gaussian_clusters(spec.n, spec.noise, rng)
    elif spec.generator == "line_1d":
        points, truth, labels = _line_1d(spec.n, spec.noise, rng)
    else:
        points, truth, labels = _trajectory(spec.n, spec.noise, rng)
    ids = tuple(f"s{i:05d}" for i in range(spec.n))
    emb = EmbeddingMatrix(values=points, sample_ids=ids)
    ann = AnnotationTable(sample_ids=ids, columns={"label": tuple(labels)})
    return SyntheticDataset(
        dataset=LabeledDataset(embeddings=emb, annotations=ann, label_column="label"),
        ground_truth=truth,
    )


def _swiss_roll(n, noise, rng):
    """(t cos t, h, t sin t) with t in [1.5 pi, 4.5 pi], h in [0, 20]."""
    t = 1.5 * math.pi + 3.0 * math.pi * rng.uniforms(n)
    h = 20.0 * rng.uniforms(n)
    points = np.column_stack([t * np.cos(t), h, t * np.sin(t)])
    if noise > 0:
        points = points + noise * rng.gaussians((n, 3))
    truth = np.column_stack([t, h])
    labels = ["roll"] * n
    return points, truth, labels


def _gaussian_clusters(n, noise, rng, c=3, sigma=0.5):
    """Three isotropic 3-D clusters, centers 10 sigma apart, round-robin sizes."""
    side = 10.0 * sigma
    height = side * math.sqrt(3.0) / 2.0
    centers = np.array([
        [0.0, 0.0, 0.0],
        [side, 0.0, 0.0],
        [side / 2.0, height, 0.0],
    ])
    assignments = np.arange(n) % c
    points = centers[assignments] + sigma * rng.gaussians((n, 3))
    if noise > 0:
        points = points + noise * rng.gaussians((n, 3))
    labels = [f"cluster{a}" for a in assignments]
    return points, assignments.astype(np.float64).reshape(-1, 1), labels


def _line_1d(n, noise, rng):
    """Evenly spaced points along a fixed direction in 3-D."""
    s = np.linspace(0.0, 10.0, n)
    direction = np.array([1.0, 2.0, -0.5])
    direction = direction / np.linalg.norm(direction)
    points = s[:, None] * direction[None, :]
    if noise > 0:
        points = points + noise * rng.gaussians((n, 3))
    return points, s.reshape(-1, 1), ["line"] * n


def _trajectory(n, noise, rng):
    """Noiseless-by-default 1-D helix arc with arc-length ground truth."""
    s = np.linspace(0.0, 4.0 * math.pi, n)
    points = np.column_stack([np.cos(s), np.sin(s), 0.25 * s])
    if noise > 0:
        points = points + noise * rng.gaussians((n, 3))
    # curve has constant speed sqrt(1 + 0.25^2), so s is proportional to arc length
    arc = s * math.sqrt(1.0 + 0.0625)
    return points, arc.reshape(-1, 1), ["trajectory"] * n
