"""Permutation test of key uniformity against a hypergeometric null.

Under the uniformity hypothesis, the key multiplicities of an n-triple
sample are the category counts of n draws without replacement from a
population holding every group element N times: a multivariate
hypergeometric vector.  The test builds that null empirically from
seeded replicates and locates the observed sample entropy within it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.random import SeedSequence

from .entropy import entropy_from_counts
from .groups import CyclicGroup
from .rng import generator, substream
from .sampling import sample_statistic, sample_triples

DEFAULT_REPLICATES = 1000


@dataclass(frozen=True, eq=False)
class NullDistribution:
    """Replicate raw-entropy values under the uniformity hypothesis."""

    order: int
    n: int
    replicates: int
    values: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        if self.values.shape != (self.replicates,):
            raise ValueError("one value per replicate required")
        if self.values.size and self.values.min() < 0:
            raise ValueError("raw entropy values cannot be negative")
        if not 1 <= self.n <= self.order * self.order:
            raise ValueError(f"sample size {self.n} outside [1, {self.order ** 2}]")


@dataclass(frozen=True)
class DhiTestReport:
    """Outcome of one permutation test of key uniformity.

    proportion_lower is the fraction of null replicates strictly below
    the observed raw entropy; p_value counts replicates at least as
    extreme (ties included).  distance_to_center is the absolute gap to
    the null mean, and relative_distance rescales it by the farthest
    replicate from the observed point (0 when the null is degenerate at
    the observation).
    """

    group: CyclicGroup
    n: int
    replicates: int
    raw_entropy: float
    statistic: float
    proportion_lower: float
    p_value: float
    distance_to_center: float
    relative_distance: float
    outside_support: bool
    sample_seed: int
    null_seed: int


def sample_null_multiplicities(
    order: int, n: int, seed: int | SeedSequence
) -> np.ndarray:
    """One multivariate hypergeometric draw of the null multiplicities.

    N categories of N copies each, sample size n without replacement;
    realized by sequential conditional draws (numpy's marginals
    method).  Returns the length-N count vector.
    """
    if order < 1:
        raise ValueError(f"order must be positive, got {order}")
    if not 1 <= n <= order * order:
        raise ValueError(f"sample size {n} outside [1, {order * order}]")
    colors = np.full(order, order, dtype=np.int64)
    gen = generator(seed)
    return gen.multivariate_hypergeometric(colors, n, method="marginals").astype(np.int64)


def null_statistic(multiplicities, n: int, *, shifted: bool = False) -> float:
    """Raw entropy sum (M/n) ln M of one null multiplicity vector.

    With shifted=True subtracts ln n; the shift cancels between the
    observed and null sides of every comparison, so the raw form is the
    default.
    """
    counts = np.asarray(multiplicities, dtype=np.int64)
    if int(counts.sum()) != n:
        raise ValueError(f"multiplicities sum {int(counts.sum())} != n {n}")
    value = entropy_from_counts(counts, n)
    return value - math.log(n) if shifted else value


def build_null_distribution(
    order: int,
    n: int,
    replicates: int,
    seed: int,
    *,
    threads: int = 1,
) -> NullDistribution:
    """Seeded null distribution of the raw entropy statistic.

    Each replicate r uses the derived substream (seed, r), so the value
    list is identical however replicates are scheduled.
    """
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")

    def one(r: int) -> float:
        counts = sample_null_multiplicities(order, n, substream(seed, r))
        return null_statistic(counts, n)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(one, range(replicates)))
    else:
        values = [one(r) for r in range(replicates)]
    return NullDistribution(order, n, replicates, np.array(values), seed)


def locate_observation(observed: float, values: np.ndarray) -> dict:
    """Position of an observed statistic within null replicate values.

    Returns proportion_lower (strictly below), p_value (at least as
    extreme, ties included), distance_to_center (gap to the replicate
    mean), relative_distance (that gap over the farthest replicate,
    0 for a null degenerate at the observation), and outside_support.
    The same quantities come out for any common shift of observed and
    values, so raw and ln-n-shifted inputs are interchangeable.
    """
    replicates = values.size
    lower = int(np.count_nonzero(values < observed))
    center = float(values.mean())
    distance = abs(observed - center)
    farthest = float(np.abs(values - observed).max())
    return {
        "proportion_lower": lower / replicates,
        "p_value": (replicates - lower) / replicates,
        "distance_to_center": distance,
        "relative_distance": 0.0 if farthest == 0.0 else min(distance / farthest, 1.0),
        "outside_support": bool(observed > values.max() or observed < values.min()),
    }


def dhi_permutation_test(
    group: CyclicGroup,
    n: int,
    replicates: int = DEFAULT_REPLICATES,
    sample_seed: int = 0,
    null_seed: int = 0,
    *,
    threads: int = 1,
) -> DhiTestReport:
    """Full permutation test of key uniformity for one group.

    Draws the observed sample, builds the null, and reports where the
    observation falls: tail proportions, distance to the null mean, and
    that distance relative to the farthest replicate.
    """
    observed = sample_statistic(sample_triples(group, n, sample_seed))
    null = build_null_distribution(group.order, n, replicates, null_seed, threads=threads)
    location = locate_observation(observed.raw_entropy, null.values)
    return DhiTestReport(
        group=group,
        n=n,
        replicates=replicates,
        raw_entropy=observed.raw_entropy,
        statistic=observed.statistic,
        sample_seed=sample_seed,
        null_seed=null_seed,
        **location,
    )
