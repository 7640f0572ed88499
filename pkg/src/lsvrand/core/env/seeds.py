"""
Seed derivation

All randomness flows from a single 64-bit seed. Replica k of a computation
uses ``splitmix64(seed ^ splitmix64(k))``. Nested keys chain left to right, so
``derive_seed(s, a, b) == derive_seed(derive_seed(s, a), b)`` and swapping or
repeating keys gives a different seed. Each derived seed drives a
counter-based Philox generator, so results do not depend on how replicas are
scheduled across workers.
"""

from typing import Iterator, Tuple

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """Return the splitmix64 output for the given 64-bit state."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    """Fold replica keys into a base seed.

    Args:
        seed: Base 64-bit seed
        *keys: Replica indices, outermost first

    Returns:
        Derived 64-bit seed
    """
    derived = seed & MASK64
    for key in keys:
        # nested derivations must not commute
        derived = splitmix64(derived ^ splitmix64(key & MASK64))
    return derived


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based generator for a (seed, keys) pair."""
    return np.random.Generator(np.random.Philox(derive_seed(seed, *keys)))


def sample_blocks(n_samples: int, block_size: int) -> Iterator[Tuple[int, int, int]]:
    """Split a sample count into fixed blocks.

    Yields:
        (block index, start, stop) triples; the split depends only on the
        arguments, never on the number of workers.
    """
    if block_size <= 0:
        raise ValueError("block_size must be positive")
    for index, start in enumerate(range(0, n_samples, block_size)):
        yield index, start, min(start + block_size, n_samples)
