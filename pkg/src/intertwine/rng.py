"""Deterministic stream derivation for reproducible (parallel) Monte Carlo.

Every stochastic routine in the package draws from a numpy Generator.  Monte
Carlo drivers derive one independent stream per path (or per named check)
from a single master seed with a fixed 64-bit mixing function, so results
are bit-identical for a given seed no matter how work is chunked or how
many workers run.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a fixed 64-bit avalanche permutation."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def child_seed(master_seed: int, index: int) -> int:
    """Seed for sub-stream ``index`` of ``master_seed`` (worker independent)."""
    return mix64((master_seed & _MASK64) ^ mix64(index & _MASK64))


def named_seed(master_seed: int, name: str) -> int:
    """Seed for a named sub-stream; the name is hashed stably (not id-based)."""
    digest = hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest()
    return child_seed(master_seed, int.from_bytes(digest, "little"))


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & _MASK64))


def path_generator(master_seed: int, path_index: int) -> np.random.Generator:
    """The stream owned by one Monte Carlo path."""
    return generator(child_seed(master_seed, path_index))
