"""Seeded sampling of DH triples and the sample entropy statistic.

A sample draws n exponent pairs (a_i, b_i) uniformly with replacement
from [1,N]^2 and works in exponent space throughout: the triple
(g^a, g^b, g^ab) is determined by (a, b, a*b mod N), and the entropy
statistic only depends on collision patterns, which the generator
bijection preserves.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .entropy import MultiplicityTable, entropy_from_counts
from .groups import CyclicGroup
from .rng import generator, substream

# Above this order a*b no longer fits int64; fall back to Python ints.
_VECTOR_ORDER_LIMIT = 1 << 31


@dataclass(frozen=True, eq=False)
class TripleSample:
    """n seeded draws of (g^a, g^b, g^ab), stored as distinct exponent pairs.

    pair_a/pair_b/pair_counts are parallel arrays over the distinct
    observed pairs (counts sum to n); key_exponents[i] is
    (pair_a[i] * pair_b[i]) mod N, the exponent of the shared key.
    """

    group: CyclicGroup
    n: int
    seed: int
    pair_a: np.ndarray
    pair_b: np.ndarray
    pair_counts: np.ndarray
    key_exponents: np.ndarray

    def __post_init__(self) -> None:
        shapes = {
            self.pair_a.shape,
            self.pair_b.shape,
            self.pair_counts.shape,
            self.key_exponents.shape,
        }
        if len(shapes) != 1:
            raise ValueError("pair arrays must be parallel")
        if int(self.pair_counts.sum()) != self.n:
            raise ValueError(
                f"pair counts sum {int(self.pair_counts.sum())} != sample size {self.n}"
            )

    def iter_triples(self) -> Iterator[tuple[int, int, int, int]]:
        """Yield (x, y, z, count) with the elements materialized mod p."""
        p, g, order = self.group.modulus, self.group.generator, self.group.order
        for a, b, k in zip(
            self.pair_a.tolist(), self.pair_b.tolist(), self.pair_counts.tolist()
        ):
            yield pow(g, a, p), pow(g, b, p), pow(g, a * b % order, p), k


@dataclass(frozen=True)
class SampleStatistic:
    """Entropy statistic of one triple sample.

    raw_entropy is the unshifted value sum (m_k/n) ln m_k over the
    sample's key multiplicities, the same function of multiplicities
    the null replicates use, so the permutation comparison is
    like for like.  statistic subtracts ln n, which cancels in every
    comparison against the null distribution.
    """

    raw_entropy: float
    statistic: float
    n: int


def sample_triples(group: CyclicGroup, n: int, seed: int) -> TripleSample:
    """Draw n exponent pairs i.i.d. uniform on [1,N]^2, seeded.

    Deterministic per (group, n, seed); duplicates are aggregated into
    per-pair counts sorted by (a, b).
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    order = group.order
    gen = generator(substream(seed, 0))
    # row-major (a_i, b_i) rows: a size-k run consumes a prefix of the
    # size-n stream, so nested sample sizes share their draws
    draws = gen.integers(1, order + 1, size=(n, 2), dtype=np.uint64)
    a = draws[:, 0]
    b = draws[:, 1]
    if order <= _VECTOR_ORDER_LIMIT:
        a = a.astype(np.int64)
        b = b.astype(np.int64)
        keys = (a - 1) * order + (b - 1)
        distinct, counts = np.unique(keys, return_counts=True)
        pa = distinct // order + 1
        pb = distinct % order + 1
        zexp = (pa * pb) % order
    else:
        tally = Counter(zip(a.tolist(), b.tolist()))
        pairs = sorted(tally)
        pa = np.array([x for x, _ in pairs], dtype=np.int64)
        pb = np.array([y for _, y in pairs], dtype=np.int64)
        counts = np.array([tally[pair] for pair in pairs], dtype=np.int64)
        zexp = np.array([x * y % order for x, y in pairs], dtype=np.int64)
    return TripleSample(
        group=group,
        n=n,
        seed=seed,
        pair_a=pa,
        pair_b=pb,
        pair_counts=counts.astype(np.int64),
        key_exponents=zexp,
    )


def z_multiplicities(sample: TripleSample) -> MultiplicityTable:
    """Multiplicity of each key element among the sample's z-components."""
    cats, inverse = np.unique(sample.key_exponents, return_inverse=True)
    counts = np.zeros(cats.size, dtype=np.int64)
    np.add.at(counts, inverse, sample.pair_counts)
    return MultiplicityTable(
        categories=cats.astype(np.int64),
        counts=counts,
        total=sample.n,
        order=sample.group.order,
    )


def sample_statistic(sample: TripleSample) -> SampleStatistic:
    """Entropy statistic of the sample.

    Repeated draws of the same pair enter through the key multiplicity
    alone, mirroring the null model, which counts category
    multiplicities with no notion of which pair produced them.  The
    grouped accumulation matches the exact engine's, so an exhaustive
    sample reproduces the exact entropy bit for bit, and the raw value
    is zero exactly when every sampled key is distinct.
    """
    n = sample.n
    raw = entropy_from_counts(z_multiplicities(sample).counts, n)
    return SampleStatistic(raw_entropy=raw, statistic=raw - math.log(n), n=n)
