"""Survey driver: prime-range scans, cross-group runs, file output.

Work items are (prime, family) pairs executed on a configurable worker
pool; every record carries the concrete seeds that reproduce it, and
output rows are always written in (prime, family, n) order so files are
byte-identical for any worker count.
"""

from __future__ import annotations

import enum
import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .entropy import DEFAULT_EXACT_BOUND, exact_dhi_statistic
from .errors import InvalidConfigError
from .groups import (
    CyclicGroup,
    GroupFamily,
    PrimeClass,
    PrimeLabel,
    is_prime,
    is_safe_prime,
    make_full_group,
    make_prime_subgroup,
)
from .permutation import DEFAULT_REPLICATES, dhi_permutation_test
from .rng import derive_seed_pair

MAX_RANGE_BOUND = 1 << 63

# Sample-size schedule of the reference run on the full group mod 1193,
# from 59 up to just under the exhaustive N^2.
TABLE1_SCHEDULE: tuple[int, ...] = (
    59, 118, 354, 885, 1829, 3304, 5428, 8319, 12095, 16874,
    22774, 29913, 38409, 48380, 59944, 73219, 88323, 105374, 124490, 145789,
    169389, 195408, 223964, 255175, 289159, 326034, 365918, 408929, 455185, 504804,
    557904, 614603, 675019, 739270, 807474, 879749, 956213, 1036984, 1122180, 1211919,
    1306319,
)


class SurveyMode(str, enum.Enum):
    EXACT = "Exact"
    SAMPLED = "Sampled"


@dataclass(frozen=True)
class SurveyRecord:
    """One (prime, family) result row of a survey run.

    Exact mode: n = 0 and every sampling field is None.  Sampled mode:
    statistic is the raw sample entropy and the permutation-test fields
    are filled.
    """

    prime: int
    label: PrimeLabel
    family: GroupFamily
    order: int
    mode: SurveyMode
    n: int
    replicates: int | None
    statistic: float
    p_value: float | None
    proportion_lower: float | None
    distance_to_center: float | None
    relative_distance: float | None
    sample_seed: int | None
    null_seed: int | None


@dataclass(frozen=True)
class Table1Record:
    """One sample-size row of the reference-table reproduction."""

    n: int
    sample_entropy: float
    proportion_lower: float
    distance_to_center: float
    relative_distance: float


@dataclass(frozen=True)
class SurveyConfig:
    """Settings for one survey run.

    Sampled mode uses a single common n and replicate count for every
    group in the range; cross-group values are only comparable at equal
    sample sizes.
    """

    mode: SurveyMode = SurveyMode.EXACT
    families: tuple[GroupFamily, ...] = (GroupFamily.FULL_GROUP,)
    n: int = 0
    replicates: int = DEFAULT_REPLICATES
    base_seed: int = 0
    threads: int = 1
    exact_bound: int = DEFAULT_EXACT_BOUND


_FAMILY_CODE = {GroupFamily.FULL_GROUP: 0, GroupFamily.PRIME_SUBGROUP: 1}


def classify_primes(lo: int, hi: int) -> list[PrimeClass]:
    """All primes in [lo, hi], ascending, tagged safe / other."""
    if hi >= MAX_RANGE_BOUND:
        raise InvalidConfigError(f"range bound {hi} above 2^63")
    out = []
    for p in range(max(lo, 2), hi + 1):
        if is_prime(p):
            label = PrimeLabel.SAFE_PRIME if is_safe_prime(p) else PrimeLabel.OTHER_PRIME
            out.append(PrimeClass(p, label))
    return out


def _build_group(prime: int, family: GroupFamily) -> CyclicGroup:
    if family is GroupFamily.FULL_GROUP:
        return make_full_group(prime)
    return make_prime_subgroup(prime)


def _survey_item(prime: int, label: PrimeLabel, family: GroupFamily, config: SurveyConfig) -> SurveyRecord:
    group = _build_group(prime, family)
    if config.mode is SurveyMode.EXACT:
        result = exact_dhi_statistic(group, exact_bound=config.exact_bound)
        return SurveyRecord(
            prime=prime, label=label, family=family, order=group.order,
            mode=config.mode, n=0, replicates=None, statistic=result.statistic,
            p_value=None, proportion_lower=None, distance_to_center=None,
            relative_distance=None, sample_seed=None, null_seed=None,
        )
    sample_seed, null_seed = derive_seed_pair(
        config.base_seed, prime, _FAMILY_CODE[family]
    )
    report = dhi_permutation_test(
        group, config.n, config.replicates, sample_seed, null_seed
    )
    return SurveyRecord(
        prime=prime, label=label, family=family, order=group.order,
        mode=config.mode, n=config.n, replicates=config.replicates,
        statistic=report.raw_entropy, p_value=report.p_value,
        proportion_lower=report.proportion_lower,
        distance_to_center=report.distance_to_center,
        relative_distance=report.relative_distance,
        sample_seed=sample_seed, null_seed=null_seed,
    )


def run_survey(
    lo: int,
    hi: int,
    config: SurveyConfig,
    on_record: Callable[[SurveyRecord], None] | None = None,
) -> list[SurveyRecord]:
    """Survey every requested (prime, family) combination in [lo, hi].

    Subgroup records are emitted only for safe primes.  Records are
    produced in (prime, family) order; on_record streams them as each
    becomes available in that order.
    """
    if not config.families:
        raise InvalidConfigError("no group families requested")
    if config.mode is SurveyMode.SAMPLED:
        if config.n < 1:
            raise InvalidConfigError("sampled mode needs a sample size n >= 1")
        if config.replicates < 1:
            raise InvalidConfigError("sampled mode needs replicates >= 1")
    items: list[tuple[int, PrimeLabel, GroupFamily]] = []
    for cls in classify_primes(lo, hi):
        for family in sorted(config.families, key=lambda f: f.value):
            if family is GroupFamily.PRIME_SUBGROUP and cls.label is not PrimeLabel.SAFE_PRIME:
                continue
            if family is GroupFamily.FULL_GROUP and cls.prime == 2:
                continue  # Z_2^* is trivial; no generator >= 2 exists
            items.append((cls.prime, cls.label, family))
    if config.mode is SurveyMode.SAMPLED and items:
        smallest = min(
            (p - 1) // 2 if fam is GroupFamily.PRIME_SUBGROUP else p - 1
            for p, _, fam in items
        )
        if config.n > smallest * smallest:
            raise InvalidConfigError(
                f"sample size {config.n} exceeds the smallest group's "
                f"population {smallest * smallest}"
            )

    def work(item: tuple[int, PrimeLabel, GroupFamily]) -> SurveyRecord:
        prime, label, family = item
        return _survey_item(prime, label, family, config)

    records: list[SurveyRecord] = []
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            for record in pool.map(work, items):
                records.append(record)
                if on_record is not None:
                    on_record(record)
    else:
        for item in items:
            record = work(item)
            records.append(record)
            if on_record is not None:
                on_record(record)
    return records


def reproduce_table1(
    p: int,
    schedule: Sequence[int] = TABLE1_SCHEDULE,
    replicates: int = DEFAULT_REPLICATES,
    base_seed: int = 0,
    null_base_seed: int | None = None,
) -> list[Table1Record]:
    """Permutation-test rows for the full group mod p over a size schedule.

    Per-row seeds derive from (base_seed, n); pass null_base_seed to
    decouple the null stream from the sampling stream.
    """
    if not is_prime(p) or p < 3:
        raise InvalidConfigError(f"{p} is not an odd prime")
    if not schedule:
        raise InvalidConfigError("empty sample-size schedule")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise InvalidConfigError("schedule must be strictly increasing")
    group = make_full_group(p)
    population = group.order * group.order
    if schedule[-1] > population:
        raise InvalidConfigError(
            f"schedule entry {schedule[-1]} exceeds population {population}"
        )
    rows = []
    for n in schedule:
        sample_seed, null_seed = derive_seed_pair(base_seed, n)
        if null_base_seed is not None:
            null_seed = derive_seed_pair(null_base_seed, n)[1]
        report = dhi_permutation_test(group, n, replicates, sample_seed, null_seed)
        rows.append(
            Table1Record(
                n=n,
                sample_entropy=report.raw_entropy,
                proportion_lower=report.proportion_lower,
                distance_to_center=report.distance_to_center,
                relative_distance=report.relative_distance,
            )
        )
    return rows


SURVEY_HEADER = (
    "prime,class,family,order,mode,n,replicates,statistic,p_value,"
    "proportion_lower,distance_to_center,relative_distance,sample_seed,null_seed"
)
TABLE1_HEADER = "n,sample_entropy,proportion_lower,distance_to_center,relative_distance"
CLASSIFY_HEADER = "prime,class"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.15g}"
    if isinstance(value, enum.Enum):
        return value.value
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return float(f"{value:.15g}")
    if isinstance(value, enum.Enum):
        return value.value
    return value


def record_row(record) -> dict:
    """Ordered field mapping of a record, matching the CSV headers."""
    if isinstance(record, SurveyRecord):
        return {
            "prime": record.prime, "class": record.label, "family": record.family,
            "order": record.order, "mode": record.mode, "n": record.n,
            "replicates": record.replicates, "statistic": record.statistic,
            "p_value": record.p_value, "proportion_lower": record.proportion_lower,
            "distance_to_center": record.distance_to_center,
            "relative_distance": record.relative_distance,
            "sample_seed": record.sample_seed, "null_seed": record.null_seed,
        }
    if isinstance(record, Table1Record):
        return {
            "n": record.n, "sample_entropy": record.sample_entropy,
            "proportion_lower": record.proportion_lower,
            "distance_to_center": record.distance_to_center,
            "relative_distance": record.relative_distance,
        }
    if isinstance(record, PrimeClass):
        return {"prime": record.prime, "class": record.label}
    raise TypeError(f"unsupported record type {type(record).__name__}")


def _sort_key(record):
    if isinstance(record, SurveyRecord):
        return (record.prime, record.family.value, record.n)
    if isinstance(record, Table1Record):
        return (record.n,)
    return (record.prime,)


_HEADERS = {
    "survey": SURVEY_HEADER,
    "table1": TABLE1_HEADER,
    "classify": CLASSIFY_HEADER,
}


def render_report(records: Sequence, fmt: str, kind: str = "survey") -> str:
    """Render records to CSV or JSON text, deterministically ordered.

    Floats carry 15 significant digits; absent fields are empty in CSV
    and null in JSON.  An empty record list renders the header for
    `kind` alone.
    """
    ordered = sorted(records, key=_sort_key)
    if ordered:
        header = record_row(ordered[0])
    else:
        header = dict.fromkeys(_HEADERS[kind].split(","))
    if fmt == "csv":
        lines = [",".join(header)]
        lines.extend(",".join(_fmt(v) for v in record_row(r).values()) for r in ordered)
        return "\n".join(lines) + "\n"
    if fmt == "json":
        rows = [
            {k: _json_value(v) for k, v in record_row(r).items()} for r in ordered
        ]
        return json.dumps(rows, indent=2) + "\n"
    raise InvalidConfigError(f"unknown format {fmt!r}")


def emit_report(records: Sequence, fmt: str, path: str, kind: str = "survey") -> None:
    """Write records to path atomically; partial files never survive."""
    text = render_report(records, fmt, kind)
    directory = os.path.dirname(os.path.abspath(path))
    tmp_name = None
    try:
        fd, tmp_name = tempfile.mkstemp(dir=directory, suffix=".part")
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp_name, path)
        tmp_name = None
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    finally:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)
