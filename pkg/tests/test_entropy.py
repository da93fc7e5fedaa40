import math

import numpy as np
import pytest

from dhitest.entropy import (
    ExactTestResult,
    JointPmf3,
    MultiplicityTable,
    analytic_subgroup_statistic,
    conditional_entropy,
    entropy_from_counts,
    exact_conditional_entropy,
    exact_dhi_statistic,
    exact_multiplicities,
    exponent_multiplicities,
    independence_test,
    joint_entropy,
)
from dhitest.errors import InvalidDistributionError, ResourceLimitError
from dhitest.groups import make_full_group, make_prime_subgroup

from oracles import (
    element_space_entropy,
    multiplicative_order,
    naive_conditional_entropy,
    naive_entropy,
    naive_joint_entropy,
    naive_multiplicities,
    sieve_primes,
    subgroup_element_space_entropy,
)

# frozen from the naive [1,N]^2 enumeration oracle
ORDER5_ENTROPY = 1.678229238957769
ORDER5_STATISTIC = 0.068791326523669
ORDER5_GAP = 1.540646585910431
ORDER2_STATISTIC = 0.130812035941137


def uniform_pmf(nx, ny, nz):
    return JointPmf3(np.full((nx, ny, nz), 1.0 / (nx * ny * nz)))


class TestJointPmf3:
    def test_rejects_negative(self):
        arr = np.full((2, 2, 1), 0.25)
        arr[0, 0, 0] = -0.25
        arr[1, 1, 0] = 0.75
        with pytest.raises(InvalidDistributionError):
            JointPmf3(arr)

    def test_rejects_bad_total(self):
        with pytest.raises(InvalidDistributionError):
            JointPmf3(np.full((2, 2, 2), 0.25))

    def test_rejects_wrong_rank(self):
        with pytest.raises(InvalidDistributionError):
            JointPmf3(np.full((2, 2), 0.25))

    def test_support_sizes(self):
        assert uniform_pmf(2, 3, 4).support_sizes == (2, 3, 4)


class TestJointEntropy:
    def test_uniform_pairs(self):
        assert joint_entropy(uniform_pmf(2, 2, 1)) == pytest.approx(math.log(4), abs=1e-14)

    def test_point_mass(self):
        arr = np.zeros((2, 2, 2))
        arr[1, 0, 1] = 1.0
        assert joint_entropy(JointPmf3(arr)) == 0.0

    def test_half_quarter_quarter(self):
        arr = np.zeros((2, 2, 1))
        arr[0, 0, 0] = 0.5
        arr[0, 1, 0] = 0.25
        arr[1, 0, 0] = 0.25
        expected = 0.5 * math.log(2) + 0.5 * math.log(4)
        assert joint_entropy(JointPmf3(arr)) == pytest.approx(expected, abs=1e-14)

    def test_matches_naive_on_random(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            shape = tuple(rng.integers(1, 5, size=3))
            arr = rng.dirichlet(np.ones(np.prod(shape))).reshape(shape)
            pmf = JointPmf3(arr)
            assert joint_entropy(pmf) == pytest.approx(
                naive_joint_entropy(arr.tolist()), abs=1e-12
            )


class TestConditionalEntropy:
    def test_constant_z_changes_nothing(self):
        pmf = uniform_pmf(2, 2, 1)
        assert conditional_entropy(pmf) == pytest.approx(math.log(4), abs=1e-14)

    def test_independent_z_equals_joint(self):
        rng = np.random.default_rng(3)
        pxy = rng.dirichlet(np.ones(6)).reshape(2, 3)
        pz = rng.dirichlet(np.ones(4))
        pmf = JointPmf3(pxy[:, :, None] * pz[None, None, :])
        assert conditional_entropy(pmf) == pytest.approx(joint_entropy(pmf), abs=1e-12)

    def test_z_identifies_pair(self):
        arr = np.zeros((2, 2, 4))
        for k, (i, j) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
            arr[i, j, k] = 0.25
        assert conditional_entropy(JointPmf3(arr)) == 0.0

    def test_rejects_zero_z_marginal(self):
        arr = np.zeros((2, 2, 2))
        arr[:, :, 0] = 0.25
        with pytest.raises(InvalidDistributionError):
            conditional_entropy(JointPmf3(arr))

    def test_never_exceeds_joint(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            shape = tuple(rng.integers(2, 5, size=3))
            arr = rng.dirichlet(np.ones(np.prod(shape))).reshape(shape)
            pmf = JointPmf3(arr)
            assert conditional_entropy(pmf) <= joint_entropy(pmf) + 1e-12

    def test_matches_naive_on_random(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            shape = tuple(rng.integers(1, 5, size=3))
            arr = rng.dirichlet(np.ones(np.prod(shape))).reshape(shape)
            pmf = JointPmf3(arr)
            assert conditional_entropy(pmf) == pytest.approx(
                naive_conditional_entropy(arr.tolist()), abs=1e-12
            )


class TestExponentMultiplicities:
    def test_order_one(self):
        table = exponent_multiplicities(1)
        assert table.as_dict() == {0: 1}
        assert table.total == 1
        # trivial group: zero statistic and zero independence gap
        assert entropy_from_counts(table.counts, table.total) == 0.0

    def test_order_five(self):
        table = exponent_multiplicities(5)
        assert table.as_dict() == {0: 9, 1: 4, 2: 4, 3: 4, 4: 4}
        assert table.total == 25

    def test_order_four(self):
        assert exponent_multiplicities(4).as_dict() == {0: 8, 1: 2, 2: 4, 3: 2}

    def test_matches_naive_enumeration(self):
        for order in range(1, 41):
            assert exponent_multiplicities(order).as_dict() == naive_multiplicities(order)

    def test_counts_sum_to_population(self):
        for order in (2, 17, 100, 1192):
            table = exponent_multiplicities(order)
            assert int(table.counts.sum()) == order * order

    def test_thread_count_does_not_change_counts(self):
        base = exponent_multiplicities(2500, threads=1)
        for threads in (2, 5):
            other = exponent_multiplicities(2500, threads=threads)
            assert np.array_equal(base.counts, other.counts)

    def test_table_validation(self):
        with pytest.raises(ValueError):
            MultiplicityTable(np.array([0, 1]), np.array([1, 1]), 3, 2)
        with pytest.raises(ValueError):
            MultiplicityTable(np.array([5]), np.array([1]), 1, 2)


class TestExactEntropy:
    def test_bound_enforced(self):
        group = make_full_group(1193)
        with pytest.raises(ResourceLimitError):
            exact_multiplicities(group, exact_bound=1000)

    def test_order5_subgroup_value(self):
        group = make_prime_subgroup(11)
        assert exact_conditional_entropy(group) == pytest.approx(ORDER5_ENTROPY, abs=1e-12)

    def test_uniform_counts_give_exact_log(self):
        # degenerate uniform table must hit ln N to the last bit
        for n in (5, 30, 1192):
            assert entropy_from_counts([n] * n, n * n) == math.log(n)

    def test_exact_statistic_order5(self):
        result = exact_dhi_statistic(make_prime_subgroup(11))
        assert isinstance(result, ExactTestResult)
        assert result.statistic == pytest.approx(ORDER5_STATISTIC, abs=1e-12)
        assert result.independence_gap == pytest.approx(ORDER5_GAP, abs=1e-12)
        assert result.statistic == pytest.approx(
            result.conditional_entropy - math.log(5), abs=1e-15
        )

    def test_statistic_positive_small_full_groups(self):
        for p in sieve_primes(200):
            if p < 3:
                continue
            result = exact_dhi_statistic(make_full_group(p))
            assert result.statistic > 0
            assert result.independence_gap > 0

    def test_group_size_does_not_order_security(self):
        # the larger group mod 2131 is further from uniform than mod 1193
        smaller = exact_dhi_statistic(make_full_group(1193)).statistic
        larger = exact_dhi_statistic(make_full_group(2131)).statistic
        assert larger > smaller

    def test_independence_only_in_trivial_group(self):
        gap, independent = independence_test(make_prime_subgroup(11))
        assert not independent
        assert gap == pytest.approx(ORDER5_GAP, abs=1e-12)

    def test_element_space_equivalence(self):
        # exponent-space counting equals the materialized product law
        for p in sieve_primes(199):
            if p < 3:
                continue
            group = make_full_group(p)
            expected = element_space_entropy(p, group.generator)
            assert exact_conditional_entropy(group) == pytest.approx(expected, abs=1e-9)
        for p in (5, 7, 11, 23, 47, 59, 83, 107, 167, 179, 227, 263, 347, 359, 383):
            group = make_prime_subgroup(p)
            expected = subgroup_element_space_entropy(p, group.generator, group.order)
            assert exact_conditional_entropy(group) == pytest.approx(expected, abs=1e-9)

    def test_generator_choice_irrelevant(self):
        # a different primitive root yields the same exact statistic
        for p in (13, 61, 199):
            group = make_full_group(p)
            second_root = next(
                h
                for h in range(group.generator + 1, p)
                if multiplicative_order(h, p) == p - 1
            )
            expected = element_space_entropy(p, second_root)
            assert exact_conditional_entropy(group) == pytest.approx(expected, abs=1e-9)


class TestAnalyticSubgroupStatistic:
    def test_q5(self):
        assert analytic_subgroup_statistic(5) == pytest.approx(ORDER5_STATISTIC, abs=1e-12)

    def test_q2(self):
        assert analytic_subgroup_statistic(2) == pytest.approx(ORDER2_STATISTIC, abs=1e-12)

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            analytic_subgroup_statistic(6)

    def test_vanishes_for_large_orders(self):
        for q in (1013, 4999, 99991):
            value = analytic_subgroup_statistic(q)
            assert 0 < value < 10 * math.log(q) / q

    def test_matches_enumeration_small_safe_primes(self):
        for p in (5, 7, 11, 23, 47, 59, 83):
            q = (p - 1) // 2
            enumerated = exact_dhi_statistic(make_prime_subgroup(p)).statistic
            assert abs(analytic_subgroup_statistic(q) - enumerated) < 1e-12

    def test_matches_naive_oracle(self):
        for q in (2, 3, 5, 11, 23):
            expected = naive_entropy(naive_multiplicities(q), q * q) - math.log(q)
            assert analytic_subgroup_statistic(q) == pytest.approx(expected, abs=1e-13)
