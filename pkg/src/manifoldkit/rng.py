"""Seeded pseudo-random numbers from a pinned 64-bit generator.

All seeded randomness in the library (optimizer initializations, synthetic
fixtures) flows through SplitMix64 so that a (seed, call-sequence) pair
reproduces bit-for-bit on any platform, independent of numpy version or
BLAS build.  The constants are the published SplitMix64 ones.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 stream: 64-bit state, additive gamma, two xor-mul mixes."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) using the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniforms(self, shape) -> np.ndarray:
        n = int(np.prod(shape))
        out = np.array([self.uniform() for _ in range(n)])
        return out.reshape(shape)

    def gaussians(self, shape) -> np.ndarray:
        """Standard normals via Box-Muller; draws are consumed in pairs."""
        n = int(np.prod(shape))
        out = np.empty(n)
        i = 0
        while i < n:
            # u1 shifted into (0, 1] so log never sees zero
            u1 = ((self.next_u64() >> 11) + 1) * 2.0 ** -53
            u2 = self.uniform()
            r = math.sqrt(-2.0 * math.log(u1))
            out[i] = r * math.cos(2.0 * math.pi * u2)
            if i + 1 < n:
                out[i + 1] = r * math.sin(2.0 * math.pi * u2)
            i += 2
        return out.reshape(shape)
