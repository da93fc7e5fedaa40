import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dhitest.groups import (
    CyclicGroup,
    GroupFamily,
    element_of,
    factorize,
    find_generator,
    is_prime,
    is_safe_prime,
    legendre_symbol,
    make_full_group,
    make_prime_subgroup,
    mod_pow,
)

from oracles import (
    multiplicative_order,
    naive_primitive_root,
    quadratic_residues,
    sieve_primes,
)

PRIMES_5K = sieve_primes(5000)
PRIME_SET_5K = set(PRIMES_5K)


class TestModPow:
    def test_exponent_zero_is_identity(self):
        assert mod_pow(5, 0, 13) == 1

    def test_small_power_without_reduction(self):
        assert mod_pow(2, 10, 1193) == 1024

    def test_fermat_little_theorem(self):
        assert mod_pow(3, 1192, 1193) == 1

    def test_rejects_bad_modulus(self):
        with pytest.raises(ValueError):
            mod_pow(0, 3, 1)

    def test_rejects_base_out_of_range(self):
        with pytest.raises(ValueError):
            mod_pow(13, 2, 13)

    def test_rejects_negative_exponent(self):
        with pytest.raises(ValueError):
            mod_pow(2, -1, 13)

    @given(
        base=st.integers(0, 499),
        exponent=st.integers(0, 60),
        modulus=st.integers(2, 500),
    )
    @settings(max_examples=150)
    def test_matches_repeated_multiplication(self, base, exponent, modulus):
        base %= modulus
        expected = 1
        for _ in range(exponent):
            expected = expected * base % modulus
        assert mod_pow(base, exponent, modulus) == expected


class TestIsPrime:
    def test_known_values(self):
        assert is_prime(1193)
        assert not is_prime(1)
        assert not is_prime(1194)
        assert not is_prime(0)
        assert is_prime(2)

    def test_strong_pseudoprimes_rejected(self):
        assert not is_prime(561)  # Carmichael
        assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7

    def test_large_mersenne_prime(self):
        assert is_prime(2**61 - 1)
        assert not is_prime(2**62 - 1)

    def test_agrees_with_sieve(self):
        for n in range(5000):
            assert is_prime(n) == (n in PRIME_SET_5K)


class TestIsSafePrime:
    def test_examples(self):
        assert is_safe_prime(11)
        assert not is_safe_prime(13)
        assert is_safe_prime(7)
        # 9011 is prime but (9011-1)/2 = 4505 = 5 * 17 * 53 is composite
        assert not is_safe_prime(9011)

    def test_agrees_with_sieve(self):
        for p in PRIMES_5K:
            expected = p > 4 and (p - 1) // 2 in PRIME_SET_5K
            assert is_safe_prime(p) == expected

    def test_implies_both_primalities(self):
        for p in range(3, 3000):
            if is_safe_prime(p):
                assert is_prime(p) and is_prime((p - 1) // 2)


class TestFactorize:
    def test_small(self):
        assert factorize(12) == ((2, 2), (3, 1))
        assert factorize(1) == ()
        assert factorize(97) == ((97, 1),)

    def test_reconstructs(self):
        for n in list(range(1, 500)) + [2**40 + 1, 3 * 5 * 7 * 11 * 13 * 10**6 + 7]:
            prod = 1
            for p, e in factorize(n):
                assert is_prime(p)
                prod *= p**e
            assert prod == n


class TestFindGenerator:
    def test_examples(self):
        assert find_generator(7) == 3
        assert find_generator(11) == 2
        assert find_generator(13) == 2

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            find_generator(8)

    def test_matches_brute_force_order_search(self):
        for p in PRIMES_5K:
            if 3 <= p <= 61:
                assert find_generator(p) == naive_primitive_root(p)


class TestGroupConstruction:
    def test_full_group_1193(self):
        g = make_full_group(1193)
        assert g.order == 1192
        assert g.family is GroupFamily.FULL_GROUP

    def test_smallest_full_group(self):
        g = make_full_group(3)
        assert (g.order, g.generator) == (2, 2)

    def test_full_group_11(self):
        g = make_full_group(11)
        assert (g.order, g.generator) == (10, 2)

    def test_full_group_rejects_composite(self):
        with pytest.raises(ValueError):
            make_full_group(1194)

    def test_subgroup_11(self):
        g = make_prime_subgroup(11)
        assert (g.order, g.generator) == (5, 4)
        assert multiplicative_order(4, 11) == 5

    def test_subgroup_7(self):
        g = make_prime_subgroup(7)
        assert (g.order, g.generator) == (3, 4)

    def test_subgroup_rejects_non_safe(self):
        with pytest.raises(ValueError):
            make_prime_subgroup(13)

    def test_subgroup_generator_order_exact(self):
        for p in PRIMES_5K:
            if p <= 1000 and is_safe_prime(p):
                g = make_prime_subgroup(p)
                assert multiplicative_order(g.generator, p) == g.order

    def test_invalid_group_rejected(self):
        with pytest.raises(ValueError):
            CyclicGroup(11, 10, 4, GroupFamily.FULL_GROUP)  # 4 has order 5
        with pytest.raises(ValueError):
            CyclicGroup(11, 4, 2, GroupFamily.PRIME_SUBGROUP)  # 4 not prime
        with pytest.raises(ValueError):
            CyclicGroup(12, 11, 2, GroupFamily.FULL_GROUP)  # composite modulus

    def test_generator_bijection(self):
        # element_of visits every group element exactly once over [1, N]
        for group in (
            make_full_group(7),
            make_full_group(61),
            make_full_group(199),
            make_prime_subgroup(11),
            make_prime_subgroup(107),
            make_prime_subgroup(983),
        ):
            seen = {element_of(group, e) for e in range(1, group.order + 1)}
            assert len(seen) == group.order


class TestLegendreSymbol:
    def test_examples(self):
        assert legendre_symbol(2, 7) == 1
        assert legendre_symbol(0, 7) == 0
        assert legendre_symbol(3, 7) == -1

    def test_rejects_even_or_composite(self):
        with pytest.raises(ValueError):
            legendre_symbol(3, 2)
        with pytest.raises(ValueError):
            legendre_symbol(3, 9)

    def test_matches_residue_sets(self):
        for p in PRIMES_5K:
            if 3 <= p <= 61:
                residues = quadratic_residues(p)
                for a in range(p):
                    expected = 0 if a == 0 else (1 if a in residues else -1)
                    assert legendre_symbol(a, p) == expected

    def test_multiplicative(self):
        for p in (3, 7, 11, 31, 61):
            for a in range(1, p):
                for b in range(1, p):
                    assert legendre_symbol(a * b % p, p) == legendre_symbol(
                        a, p
                    ) * legendre_symbol(b, p)


class TestElementOf:
    def test_identity_at_order(self):
        assert element_of(make_full_group(7), 6) == 1

    def test_small_power(self):
        assert element_of(make_full_group(11), 3) == 8

    def test_subgroup_element(self):
        assert element_of(make_prime_subgroup(11), 2) == 5

    def test_rejects_out_of_range(self):
        group = make_full_group(7)
        with pytest.raises(ValueError):
            element_of(group, 0)
        with pytest.raises(ValueError):
            element_of(group, 7)


class TestDistinguisher:
    def test_full_group_parity_rule(self):
        # key is a non-residue exactly when both public halves are
        for p in (3, 5, 7, 11, 13):
            group = make_full_group(p)
            n = group.order
            for a in range(1, n + 1):
                x = element_of(group, a)
                for b in range(1, n + 1):
                    y = element_of(group, b)
                    z = pow(x, b, p)
                    both = legendre_symbol(x, p) == -1 and legendre_symbol(y, p) == -1
                    assert (legendre_symbol(z, p) == -1) == both

    def test_subgroup_elements_are_residues(self):
        for p in (7, 11, 23, 47):
            group = make_prime_subgroup(p)
            for e in range(1, group.order + 1):
                assert legendre_symbol(element_of(group, e), p) == 1
