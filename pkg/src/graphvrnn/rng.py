"""Seed derivation.

Every source of randomness in the package is a numpy Generator. Independent
streams are derived from a base seed plus an integer path, so any unit of
work (a graph in a dataset, a run in a benchmark) gets the same stream no
matter how the surrounding work is batched or parallelized.
"""

from __future__ import annotations

import numpy as np

# Seeds fit in 63 bits so they survive JSON manifests and signed storage.
_SEED_BOUND = 2**63


def derive(seed: int, *path: int) -> np.random.Generator:
    """Return the Generator for `seed` at the given derivation path.

    `derive(s)` and `derive(s, i, j)` are independent PCG64 streams; equal
    (seed, path) pairs always yield identical streams.
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *path: int) -> int:
    """Collapse (seed, path) into a single integer seed.

    Used where a child unit needs a seed of its own to record in a manifest
    (benchmark runs, generated-set members) rather than a live stream.
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(path))
    return int(ss.generate_state(1, dtype=np.uint64)[0] % _SEED_BOUND)


def draw_base(rng: np.random.Generator) -> int:
    """Draw a base entropy integer for per-item stream derivation."""
    return int(rng.integers(0, _SEED_BOUND))
