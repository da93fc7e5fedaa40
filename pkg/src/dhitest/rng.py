"""Deterministic random streams.

All randomness flows through the counter-based Philox bit generator.
Substreams are derived with numpy's SeedSequence spawn keys, so a
64-bit user seed plus a structural key (replicate index, prime, group
family, ...) always yields the same stream regardless of scheduling or
worker count.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

MAX_SEED = 1 << 64


def check_seed(seed: int) -> int:
    """Validate a 64-bit seed and return it."""
    if not 0 <= seed < MAX_SEED:
        raise ValueError(f"seed {seed} outside [0, 2^64)")
    return seed


def substream(seed: int, *key: int) -> SeedSequence:
    """SeedSequence for the (seed, key...) substream."""
    return SeedSequence(entropy=check_seed(seed), spawn_key=tuple(key))


def generator(source: int | SeedSequence) -> Generator:
    """Philox generator for a 64-bit seed or a derived SeedSequence."""
    if isinstance(source, SeedSequence):
        return Generator(Philox(source))
    return Generator(Philox(SeedSequence(entropy=check_seed(source))))


def derive_seed_pair(base_seed: int, *key: int) -> tuple[int, int]:
    """Two concrete 64-bit seeds derived from (base_seed, key...).

    Used where a report must record plain reusable seeds (sample seed,
    null seed) rather than an opaque stream handle.
    """
    words = substream(base_seed, *key).generate_state(2, np.uint64)
    return int(words[0]), int(words[1])
