"""Entropy measures and the exact uniformity statistic for DH triples.

The exact engine counts, over all N^2 exponent pairs (a,b) in [1,N]^2,
how often each residue a*b mod N occurs.  Because the generator maps
exponents to group elements bijectively, these counts equal the
multiplicities of each group element in the key slot of the triple
(g^a, g^b, g^ab), so every entropy value below is a function of the
group order alone.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDistributionError, ResourceLimitError
from .groups import CyclicGroup, is_prime

# Exact mode is O(order^2); refuse above this bound unless the caller
# raises it explicitly.
DEFAULT_EXACT_BOUND = 1 << 20

# Elements per numpy work chunk (64 MB of int64 intermediates at most).
_CHUNK_ELEMS = 1 << 22

_INDEPENDENCE_TOL = 1e-12


@dataclass(frozen=True)
class JointPmf3:
    """Dense joint pmf of three discrete variables (X, Y, Z).

    probabilities[i, j, k] = P(X=x_i, Y=y_j, Z=z_k).  Entries must be
    non-negative and sum to 1 within 1e-12.  Conditioning additionally
    requires every Z-marginal to be positive (checked where needed).
    """

    probabilities: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probabilities, dtype=np.float64)
        if probs.ndim != 3 or probs.size == 0:
            raise InvalidDistributionError("probabilities must be a non-empty 3-d array")
        if np.any(probs < 0):
            raise InvalidDistributionError("negative probability entry")
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-12:
            raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probabilities", probs)

    @property
    def support_sizes(self) -> tuple[int, int, int]:
        return self.probabilities.shape  # type: ignore[return-value]

    def z_marginals(self) -> np.ndarray:
        return self.probabilities.sum(axis=(0, 1))


def joint_entropy(pmf: JointPmf3) -> float:
    """H(X,Y) = -sum p(x,y,z) ln p(x,y), in nats, with 0*ln 0 = 0."""
    pxy = pmf.probabilities.sum(axis=2)
    terms = pxy[pxy > 0]
    return -math.fsum(p * math.log(p) for p in terms.tolist())


def conditional_entropy(pmf: JointPmf3) -> float:
    """H(X,Y|Z) = -sum p(x,y,z) ln p(x,y|z), in nats, with 0*ln 0 = 0.

    Raises if any Z-marginal is zero (conditioning on a null event).
    """
    pz = pmf.z_marginals()
    if np.any(pz <= 0):
        raise InvalidDistributionError("zero Z-marginal: cannot condition")
    probs = pmf.probabilities
    acc = []
    for k in range(probs.shape[2]):
        slab = probs[:, :, k]
        nz = slab[slab > 0]
        logz = math.log(float(pz[k]))
        acc.extend(p * (math.log(p) - logz) for p in nz.tolist())
    return -math.fsum(acc)


@dataclass(frozen=True, eq=False)
class MultiplicityTable:
    """Counts of each key category among DH triples.

    categories[i] is an exponent residue in [0, order) (residue c
    stands for the group element g^c, with c = 0 meaning the identity
    reached at exponent N); counts[i] is how many triples produced it.
    total is N^2 for the exact table or the sample size for a sampled
    one.
    """

    categories: np.ndarray
    counts: np.ndarray
    total: int
    order: int

    def __post_init__(self) -> None:
        cats = np.asarray(self.categories, dtype=np.int64)
        counts = np.asarray(self.counts, dtype=np.int64)
        if cats.shape != counts.shape or cats.ndim != 1:
            raise ValueError("categories and counts must be parallel 1-d arrays")
        if int(counts.sum()) != self.total:
            raise ValueError(f"counts sum {int(counts.sum())} != total {self.total}")
        if cats.size and (cats.min() < 0 or cats.max() >= self.order):
            raise ValueError(f"category outside [0, {self.order})")
        object.__setattr__(self, "categories", cats)
        object.__setattr__(self, "counts", counts)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.categories.tolist(), self.counts.tolist()))


def entropy_from_counts(counts, total: int) -> float:
    """sum (m/total) ln m over the nonzero counts, in nats.

    Groups equal counts first so that degenerate uniform inputs (all
    counts equal, covering the total) come out exactly ln(count), and
    accumulates with compensated summation.
    """
    arr = np.asarray(counts, dtype=np.int64)
    if arr.size == 0:
        return 0.0
    values, reps = np.unique(arr[arr > 0], return_counts=True)
    return math.fsum(
        (int(r) * int(v) / total) * math.log(int(v))
        for v, r in zip(values.tolist(), reps.tolist())
    )


def _count_chunk(rows: np.ndarray, order: int) -> np.ndarray:
    residues = np.arange(order, dtype=np.int64)
    prods = rows[:, None] * residues[None, :]
    prods %= order
    return np.bincount(prods.ravel(), minlength=order)


def exponent_multiplicities(order: int, *, threads: int = 1) -> MultiplicityTable:
    """Exact multiplicity table for a cyclic group of the given order.

    Counts m_c = #{(a,b) in [1,N]^2 : a*b = c mod N} for every residue
    c; the exponent range [1,N] covers each residue class exactly once,
    so counting runs over [0,N) directly.  The a-range is partitioned
    into chunks merged in index order, which keeps the result identical
    for any worker count.
    """
    if order < 1:
        raise ValueError(f"order must be positive, got {order}")
    if order == 1:
        return MultiplicityTable(np.array([0]), np.array([1]), 1, 1)
    if order > (1 << 31):
        raise ResourceLimitError(f"order {order} exceeds the exact engine's integer range")
    rows = np.arange(order, dtype=np.int64)
    step = max(1, _CHUNK_ELEMS // order)
    chunks = [rows[i : i + step] for i in range(0, order, step)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(lambda c: _count_chunk(c, order), chunks))
    else:
        partials = [_count_chunk(c, order) for c in chunks]
    counts = partials[0]
    for part in partials[1:]:
        counts = counts + part
    return MultiplicityTable(rows, counts, order * order, order)


def exact_multiplicities(
    group: CyclicGroup,
    *,
    exact_bound: int = DEFAULT_EXACT_BOUND,
    threads: int = 1,
) -> MultiplicityTable:
    """Exact table over all N^2 triples of `group`; refuses huge orders."""
    if group.order > exact_bound:
        raise ResourceLimitError(
            f"order {group.order} above exact bound {exact_bound}; use the sampling path"
        )
    return exponent_multiplicities(group.order, threads=threads)


@dataclass(frozen=True)
class ExactTestResult:
    """Exact conditional entropy and the uniformity statistic of a group.

    statistic = H(g^a,g^b|g^ab) - ln N; zero exactly when the key is
    conditionally uniform.  independence_gap = 2 ln N - H, the distance
    from the independence hypothesis.
    """

    group: CyclicGroup
    conditional_entropy: float
    statistic: float
    independence_gap: float


def exact_conditional_entropy(
    group: CyclicGroup,
    *,
    exact_bound: int = DEFAULT_EXACT_BOUND,
    threads: int = 1,
) -> float:
    """H(g^a, g^b | g^ab) over all N^2 triples, in nats."""
    table = exact_multiplicities(group, exact_bound=exact_bound, threads=threads)
    return entropy_from_counts(table.counts, table.total)


def exact_dhi_statistic(
    group: CyclicGroup,
    *,
    exact_bound: int = DEFAULT_EXACT_BOUND,
    threads: int = 1,
) -> ExactTestResult:
    """Exact uniformity statistic of the group's key distribution."""
    h = exact_conditional_entropy(group, exact_bound=exact_bound, threads=threads)
    log_n = math.log(group.order)
    return ExactTestResult(group, h, h - log_n, 2.0 * log_n - h)


def independence_test(
    group: CyclicGroup,
    *,
    exact_bound: int = DEFAULT_EXACT_BOUND,
    threads: int = 1,
) -> tuple[float, bool]:
    """Gap 2 ln N - H(g^a,g^b|g^ab) and whether it vanishes.

    A zero gap (within 1e-12) means the key is statistically
    independent of the public pair; every nontrivial group fails.
    """
    h = exact_conditional_entropy(group, exact_bound=exact_bound, threads=threads)
    gap = 2.0 * math.log(group.order) - h
    return gap, gap <= _INDEPENDENCE_TOL


def analytic_subgroup_statistic(q: int) -> float:
    """Closed-form exact statistic for a group of prime order q.

    In prime order the identity is hit by 2q-1 exponent pairs and every
    other element by q-1, so the statistic reduces to a three-term
    expression.  Strictly positive for every q >= 2 and equal to the
    enumerated statistic for any prime-order subgroup.
    """
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    total = q * q
    small = ((q - 1) * (q - 1) / total) * math.log(q - 1)
    big = ((2 * q - 1) / total) * math.log(2 * q - 1)
    return math.fsum([small, big]) - math.log(q)
