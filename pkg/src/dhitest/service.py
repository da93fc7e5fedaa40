"""HTTP service exposing the DHI test suite.

Endpoints mirror the CLI subcommands one to one; the CLI itself is a
thin client of this app.  Run standalone with:

    uvicorn dhitest.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .entropy import DEFAULT_EXACT_BOUND, exact_dhi_statistic
from .errors import InvalidConfigError, ResourceLimitError
from .groups import GroupFamily, PrimeLabel, is_safe_prime, make_full_group, make_prime_subgroup
from .permutation import DEFAULT_REPLICATES, dhi_permutation_test
from .survey import (
    TABLE1_SCHEDULE,
    SurveyConfig,
    SurveyMode,
    SurveyRecord,
    classify_primes,
    record_row,
    reproduce_table1,
    run_survey,
)

app = FastAPI(title="dhitest", version="0.1.0")


class ClassifyRequest(BaseModel):
    lo: int = Field(ge=0)
    hi: int = Field(ge=0)


class PrimeClassModel(BaseModel):
    prime: int
    label: str = Field(alias="class")
    model_config = {"populate_by_name": True}


class ClassifyResponse(BaseModel):
    records: list[PrimeClassModel]


class ExactRequest(BaseModel):
    p: int = Field(ge=3, description="prime modulus")
    subgroup: bool = False
    exact_bound: int = Field(default=DEFAULT_EXACT_BOUND, ge=1)
    threads: int = Field(default=1, ge=1)


class ExactResponse(BaseModel):
    modulus: int
    order: int
    generator: int
    family: str
    label: str
    conditional_entropy: float
    statistic: float
    independence_gap: float


class DhiTestRequest(BaseModel):
    p: int = Field(ge=3)
    subgroup: bool = False
    n: int = Field(ge=1)
    replicates: int = Field(default=DEFAULT_REPLICATES, ge=1)
    sample_seed: int = Field(default=0, ge=0, lt=1 << 64)
    null_seed: int = Field(default=0, ge=0, lt=1 << 64)


class DhiReportModel(BaseModel):
    modulus: int
    order: int
    generator: int
    family: str
    label: str
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


class SurveyRequest(BaseModel):
    lo: int = Field(ge=0)
    hi: int = Field(ge=0)
    mode: SurveyMode = SurveyMode.EXACT
    include_subgroups: bool = False
    n: int = Field(default=0, ge=0)
    replicates: int = Field(default=DEFAULT_REPLICATES, ge=1)
    base_seed: int = Field(default=0, ge=0, lt=1 << 64)
    threads: int = Field(default=1, ge=1)
    exact_bound: int = Field(default=DEFAULT_EXACT_BOUND, ge=1)


class SurveyRecordModel(BaseModel):
    prime: int
    label: str = Field(alias="class")
    family: str
    order: int
    mode: str
    n: int
    replicates: int | None
    statistic: float
    p_value: float | None
    proportion_lower: float | None
    distance_to_center: float | None
    relative_distance: float | None
    sample_seed: int | None
    null_seed: int | None
    model_config = {"populate_by_name": True}


class SurveyResponse(BaseModel):
    records: list[SurveyRecordModel]


class Table1Request(BaseModel):
    p: int = Field(ge=3)
    schedule: list[int] | None = None
    replicates: int = Field(default=DEFAULT_REPLICATES, ge=1)
    seed: int = Field(default=0, ge=0, lt=1 << 64)
    null_seed: int | None = Field(default=None, ge=0, lt=1 << 64)


class Table1RecordModel(BaseModel):
    n: int
    sample_entropy: float
    proportion_lower: float
    distance_to_center: float
    relative_distance: float


class Table1Response(BaseModel):
    records: list[Table1RecordModel]


class HealthResponse(BaseModel):
    status: str
    version: str


def _group_for(p: int, subgroup: bool):
    return make_prime_subgroup(p) if subgroup else make_full_group(p)


def _label_for(p: int) -> str:
    return (PrimeLabel.SAFE_PRIME if is_safe_prime(p) else PrimeLabel.OTHER_PRIME).value


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: ClassifyRequest) -> ClassifyResponse:
    try:
        records = classify_primes(req.lo, req.hi)
    except (ValueError, InvalidConfigError) as exc:
        raise _bad_request(exc)
    return ClassifyResponse(
        records=[PrimeClassModel(prime=r.prime, label=r.label.value) for r in records]
    )


@app.post("/exact", response_model=ExactResponse)
def exact(req: ExactRequest) -> ExactResponse:
    try:
        group = _group_for(req.p, req.subgroup)
        result = exact_dhi_statistic(
            group, exact_bound=req.exact_bound, threads=req.threads
        )
    except (ValueError, ResourceLimitError) as exc:
        raise _bad_request(exc)
    return ExactResponse(
        modulus=group.modulus,
        order=group.order,
        generator=group.generator,
        family=group.family.value,
        label=_label_for(group.modulus),
        conditional_entropy=result.conditional_entropy,
        statistic=result.statistic,
        independence_gap=result.independence_gap,
    )


@app.post("/dhi-test", response_model=DhiReportModel)
def dhi_test(req: DhiTestRequest) -> DhiReportModel:
    try:
        group = _group_for(req.p, req.subgroup)
        if req.n > group.order * group.order:
            raise InvalidConfigError(
                f"sample size {req.n} exceeds population {group.order ** 2}"
            )
        report = dhi_permutation_test(
            group, req.n, req.replicates, req.sample_seed, req.null_seed
        )
    except (ValueError, ResourceLimitError) as exc:
        raise _bad_request(exc)
    return DhiReportModel(
        modulus=group.modulus,
        order=group.order,
        generator=group.generator,
        family=group.family.value,
        label=_label_for(group.modulus),
        n=report.n,
        replicates=report.replicates,
        raw_entropy=report.raw_entropy,
        statistic=report.statistic,
        proportion_lower=report.proportion_lower,
        p_value=report.p_value,
        distance_to_center=report.distance_to_center,
        relative_distance=report.relative_distance,
        outside_support=report.outside_support,
        sample_seed=report.sample_seed,
        null_seed=report.null_seed,
    )


def _survey_record_model(record: SurveyRecord) -> SurveyRecordModel:
    row = {k: v.value if hasattr(v, "value") else v for k, v in record_row(record).items()}
    return SurveyRecordModel(**row)


@app.post("/survey", response_model=SurveyResponse)
def survey(req: SurveyRequest) -> SurveyResponse:
    families = [GroupFamily.FULL_GROUP]
    if req.include_subgroups:
        families.append(GroupFamily.PRIME_SUBGROUP)
    config = SurveyConfig(
        mode=req.mode,
        families=tuple(families),
        n=req.n,
        replicates=req.replicates,
        base_seed=req.base_seed,
        threads=req.threads,
        exact_bound=req.exact_bound,
    )
    try:
        records = run_survey(req.lo, req.hi, config)
    except (ValueError, InvalidConfigError, ResourceLimitError) as exc:
        raise _bad_request(exc)
    return SurveyResponse(records=[_survey_record_model(r) for r in records])


@app.post("/table1", response_model=Table1Response)
def table1(req: Table1Request) -> Table1Response:
    schedule = tuple(req.schedule) if req.schedule else TABLE1_SCHEDULE
    try:
        rows = reproduce_table1(
            req.p,
            schedule=schedule,
            replicates=req.replicates,
            base_seed=req.seed,
            null_base_seed=req.null_seed,
        )
    except (ValueError, InvalidConfigError) as exc:
        raise _bad_request(exc)
    return Table1Response(
        records=[
            Table1RecordModel(
                n=r.n,
                sample_entropy=r.sample_entropy,
                proportion_lower=r.proportion_lower,
                distance_to_center=r.distance_to_center,
                relative_distance=r.relative_distance,
            )
            for r in rows
        ]
    )
