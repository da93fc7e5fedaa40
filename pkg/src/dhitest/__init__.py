"""Statistical assessment of Diffie-Hellman key indistinguishability.

Exact entropy statistics over finite cyclic groups, seeded sampling
estimators, a permutation test against the hypergeometric null, and a
survey driver comparing security across group families.
"""

__version__ = "0.1.0"

from .entropy import (
    DEFAULT_EXACT_BOUND,
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
from .errors import InvalidConfigError, InvalidDistributionError, ResourceLimitError
from .groups import (
    CyclicGroup,
    GroupFamily,
    PrimeClass,
    PrimeLabel,
    element_of,
    find_generator,
    is_prime,
    is_safe_prime,
    legendre_symbol,
    make_full_group,
    make_prime_subgroup,
    mod_pow,
)
from .permutation import (
    DhiTestReport,
    NullDistribution,
    build_null_distribution,
    dhi_permutation_test,
    null_statistic,
    sample_null_multiplicities,
)
from .sampling import SampleStatistic, TripleSample, sample_statistic, sample_triples, z_multiplicities
from .survey import (
    TABLE1_SCHEDULE,
    SurveyConfig,
    SurveyMode,
    SurveyRecord,
    Table1Record,
    classify_primes,
    emit_report,
    render_report,
    reproduce_table1,
    run_survey,
)

__all__ = [
    "CyclicGroup",
    "DEFAULT_EXACT_BOUND",
    "DhiTestReport",
    "ExactTestResult",
    "GroupFamily",
    "InvalidConfigError",
    "InvalidDistributionError",
    "JointPmf3",
    "MultiplicityTable",
    "NullDistribution",
    "PrimeClass",
    "PrimeLabel",
    "ResourceLimitError",
    "SampleStatistic",
    "SurveyConfig",
    "SurveyMode",
    "SurveyRecord",
    "TABLE1_SCHEDULE",
    "Table1Record",
    "TripleSample",
    "analytic_subgroup_statistic",
    "build_null_distribution",
    "classify_primes",
    "conditional_entropy",
    "dhi_permutation_test",
    "element_of",
    "emit_report",
    "entropy_from_counts",
    "exact_conditional_entropy",
    "exact_dhi_statistic",
    "exact_multiplicities",
    "exponent_multiplicities",
    "find_generator",
    "independence_test",
    "is_prime",
    "is_safe_prime",
    "joint_entropy",
    "legendre_symbol",
    "make_full_group",
    "make_prime_subgroup",
    "mod_pow",
    "null_statistic",
    "render_report",
    "reproduce_table1",
    "run_survey",
    "sample_null_multiplicities",
    "sample_statistic",
    "sample_triples",
    "z_multiplicities",
]
