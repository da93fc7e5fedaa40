"""Finite cyclic groups used by the Diffie-Hellman exchange.

Covers the full multiplicative group mod a prime, the prime-order
subgroup of quadratic residues mod a safe prime, deterministic
primality / safe-prime classification, and the Legendre-symbol
distinguisher.  Everything here is a pure function of its inputs;
constructed groups are immutable and safe to share across workers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

# Moduli and group elements stay within 63-bit machine words; exact and
# sampled engines downstream rely on products fitting in 126 bits
# (Python ints handle that natively, numpy paths guard the 63-bit bound).
MAX_MODULUS = 1 << 63

# Deterministic Miller-Rabin witnesses, sufficient for all n < 3.317e24
# (covers the full 64-bit range; Sorenson & Webster 2015).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class GroupFamily(str, enum.Enum):
    FULL_GROUP = "FullGroup"
    PRIME_SUBGROUP = "PrimeSubgroup"


class PrimeLabel(str, enum.Enum):
    SAFE_PRIME = "SafePrime"
    OTHER_PRIME = "OtherPrime"


@dataclass(frozen=True)
class PrimeClass:
    """A prime tagged as safe (p = 2q+1 with q prime) or not."""

    prime: int
    label: PrimeLabel


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus by square-and-multiply (stdlib pow).

    Requires modulus >= 2, base in [0, modulus) and exponent >= 0;
    exponent 0 returns 1.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if not 0 <= base < modulus:
        raise ValueError(f"base {base} outside [0, {modulus})")
    if exponent < 0:
        raise ValueError(f"exponent must be non-negative, got {exponent}")
    return pow(base, exponent, modulus)


def is_prime(n: int) -> bool:
    """Exact primality for 0 <= n < 2**64.

    Deterministic Miller-Rabin with the fixed witness set
    {2,3,5,7,...,37}, which is proven correct for the whole supported
    range, so survey classification can never misclassify.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_safe_prime(p: int) -> bool:
    """True iff p is prime and (p-1)/2 is prime."""
    return p > 4 and is_prime(p) and is_prime((p - 1) // 2)


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite odd n (Brent's variant).

    Deterministic: cycles through fixed polynomial offsets instead of
    random restarts.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = _gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed to factor {n}")


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as sorted (prime, exponent) pairs.

    Trial division for small factors, Pollard rho for the remainder;
    exact over the 64-bit range.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    factors: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return tuple(sorted(factors.items()))


def find_generator(p: int) -> int:
    """Smallest primitive root of the prime p >= 3.

    Returns the least h >= 2 with h**((p-1)/r) != 1 mod p for every
    prime r dividing p-1.  Deterministic, so downstream statistics are
    reproducible.
    """
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    quotients = [(p - 1) // r for r, _ in factorize(p - 1)]
    for h in range(2, p):
        if all(pow(h, q, p) != 1 for q in quotients):
            return h
    raise ArithmeticError(f"no generator found for {p}")  # unreachable for prime p


@dataclass(frozen=True)
class CyclicGroup:
    """A cyclic group of known order inside Z_p^*.

    The generator is verified to have order exactly `order`; the family
    tag records whether this is the full multiplicative group (order
    p-1) or a prime-order subgroup.
    """

    modulus: int
    order: int
    generator: int
    family: GroupFamily

    def __post_init__(self) -> None:
        p, n, g = self.modulus, self.order, self.generator
        if not 3 <= p < MAX_MODULUS or not is_prime(p):
            raise ValueError(f"modulus {p} is not a supported prime")
        if not 2 <= g < p:
            raise ValueError(f"generator {g} outside [2, {p})")
        if self.family is GroupFamily.FULL_GROUP:
            if n != p - 1:
                raise ValueError(f"full group mod {p} must have order {p - 1}")
        else:
            if not is_prime(n) or (p - 1) % n != 0 or n == p - 1:
                raise ValueError(f"{n} is not a proper prime divisor of {p - 1}")
        if pow(g, n, p) != 1:
            raise ValueError(f"{g}^{n} != 1 mod {p}")
        if self.family is GroupFamily.PRIME_SUBGROUP:
            return  # prime order plus g != 1 already pins the order exactly
        for r, _ in factorize(n):
            if pow(g, n // r, p) == 1:
                raise ValueError(f"{g} has order below {n} mod {p}")


def make_full_group(p: int) -> CyclicGroup:
    """The full multiplicative group mod the prime p, smallest generator."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    return CyclicGroup(p, p - 1, find_generator(p), GroupFamily.FULL_GROUP)


def make_prime_subgroup(p: int) -> CyclicGroup:
    """The order-q subgroup of quadratic residues mod the safe prime p = 2q+1.

    Generator is h^2 mod p for the smallest h >= 2 whose square is not
    the identity; since q is prime, any non-identity square generates.
    """
    if not is_safe_prime(p):
        raise ValueError(f"{p} is not a safe prime")
    q = (p - 1) // 2
    h = 2
    while h * h % p == 1:
        h += 1
    g = h * h % p
    if pow(g, q, p) != 1:  # impossible for a safe prime; guards the invariant
        raise ArithmeticError(f"square {g} does not have order {q} mod {p}")
    return CyclicGroup(p, q, g, GroupFamily.PRIME_SUBGROUP)


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a|p) by Euler's criterion.

    0 if p divides a, +1 if a is a nonzero quadratic residue mod p,
    -1 otherwise.  p must be an odd prime.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    if r == p - 1:
        return -1
    return r  # 0 or 1


def element_of(group: CyclicGroup, exponent: int) -> int:
    """generator**exponent mod modulus for exponent in [1, order].

    Exponent `order` yields the identity; the range matches the secret
    exponents drawn by the exchange participants.
    """
    if not 1 <= exponent <= group.order:
        raise ValueError(f"exponent {exponent} outside [1, {group.order}]")
    return pow(group.generator, exponent, group.modulus)
