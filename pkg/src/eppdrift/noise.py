"""Reproducible Gaussian increments.

Every stream is a Philox counter-based generator seeded through
``numpy.random.SeedSequence(master_seed, spawn_key=keys)``, so trajectory
``i`` of parameter row ``r`` draws from a substream that depends only on
``(master_seed, r, stream, i)`` and never on scheduling.  Chunked draws
concatenate to exactly the same sequence as one large draw.

The generator (numpy Philox 4x64, ``standard_normal`` ziggurat) is pinned
by ``numpy>=2,<3`` in the package metadata.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CHUNK = 1 << 16

# substream labels; part of the seed derivation
DIRECT_STREAM = 0
CYCLE_STREAM = 1


def substream(master_seed: int, *keys: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(master_seed) & (2**64 - 1), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class NoisePath:
    seed: int
    dt: float
    increments: np.ndarray

    def __len__(self) -> int:
        return len(self.increments)

    def __neg__(self) -> "NoisePath":
        return NoisePath(self.seed, self.dt, -self.increments)

    def coarsen(self, factor: int) -> "NoisePath":
        """Sum consecutive blocks of ``factor`` increments (same Brownian path, step ``factor*dt``)."""
        n = len(self.increments) // factor
        inc = self.increments[: n * factor].reshape(n, factor).sum(axis=1)
        return NoisePath(self.seed, self.dt * factor, inc)


def increment_chunks(rng: np.random.Generator, dt: float, chunk: int = CHUNK):
    """Endless iterator of N(0, dt) blocks."""
    scale = math.sqrt(dt)
    while True:
        yield rng.standard_normal(chunk) * scale


def gaussian_increments(seed: int, dt: float, n: int, *keys: int) -> NoisePath:
    """``n`` i.i.d. N(0, dt) draws from the substream ``(seed, *keys)``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = substream(seed, *keys)
    inc = rng.standard_normal(n) * math.sqrt(dt)
    return NoisePath(int(seed), float(dt), inc)
