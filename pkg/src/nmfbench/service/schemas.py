"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from ..harness import (
    DirectorySource,
    ExperimentConfig,
    ExperimentReport,
    SummaryRow,
    SyntheticSource,
)
from ..metrics import MetricsReport
from ..noise import NoiseSpec


class NoiseModel(BaseModel):
    kind: Literal["block_occlusion", "salt_pepper", "none"] = "none"
    block_size: int = Field(10, ge=1)
    fill_value: float = Field(0.5, ge=0.0, le=1.0)
    fraction: float = Field(0.4, ge=0.0, le=1.0)
    salt_ratio: float = Field(0.45, ge=0.0, le=1.0)
    seed: int = 0

    def to_spec(self) -> NoiseSpec:
        return NoiseSpec(kind=self.kind, block_size=self.block_size,
                         fill_value=self.fill_value, fraction=self.fraction,
                         salt_ratio=self.salt_ratio, seed=self.seed)


class SyntheticSourceModel(BaseModel):
    kind: Literal["synthetic"] = "synthetic"
    n_subjects: int = Field(20, ge=1)
    per_subject: int = Field(10, ge=1)
    height: int = Field(24, ge=1)
    width: int = Field(20, ge=1)
    noise_scale: float = Field(0.15, ge=0.0, lt=1.0)
    seed: int = 0
    name: str = "synthetic"

    def to_source(self) -> SyntheticSource:
        return SyntheticSource(n_subjects=self.n_subjects, per_subject=self.per_subject,
                               height=self.height, width=self.width,
                               noise_scale=self.noise_scale, seed=self.seed, name=self.name)


class DirectorySourceModel(BaseModel):
    kind: Literal["directory"] = "directory"
    path: str
    reduce: int = Field(1, ge=1)
    name: str = "images"

    def to_source(self) -> DirectorySource:
        return DirectorySource(path=self.path, reduce=self.reduce, name=self.name)


DatasetSourceModel = Union[SyntheticSourceModel, DirectorySourceModel]


class ExperimentRequest(BaseModel):
    dataset: DatasetSourceModel = Field(discriminator="kind")
    noise: NoiseModel = NoiseModel()
    solvers: list[Literal["l1", "l2", "l21"]] = ["l1", "l2", "l21"]
    ks: list[int] = [10, 20, 30, 40]
    lam: float = Field(0.1, gt=0.0)
    train_fraction: float = Field(0.9, gt=0.0, le=1.0)
    trials: int = Field(5, ge=1)
    max_iters: int = Field(200, ge=1)
    base_seed: int = 0
    cluster_on: Literal["coefficients", "reconstruction"] = "coefficients"

    @field_validator("ks")
    @classmethod
    def _ks_positive(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("at least one k is required")
        if any(k < 1 for k in v):
            raise ValueError("every k must be >= 1")
        return v

    @field_validator("solvers")
    @classmethod
    def _solvers_nonempty(cls, v: list[str]) -> list[str]:
        if not v:
            raise ValueError("at least one solver is required")
        return v

    def to_config(self) -> ExperimentConfig:
        return ExperimentConfig(
            dataset=self.dataset.to_source(),
            noise=self.noise.to_spec(),
            solvers=tuple(self.solvers),
            ks=tuple(self.ks),
            lam=self.lam,
            train_fraction=self.train_fraction,
            trials=self.trials,
            max_iters=self.max_iters,
            base_seed=self.base_seed,
            cluster_on=self.cluster_on,
        )


class TrialRecordModel(BaseModel):
    dataset: str
    noise: str
    solver: str
    k: int
    trial: int
    seed: int
    rmse_clean: float
    rmse_noisy: float
    acc: float
    nmi: float
    runtime_ms: int
    input_digest: str = ""

    @classmethod
    def from_record(cls, r: MetricsReport) -> "TrialRecordModel":
        return cls(dataset=r.dataset, noise=r.noise, solver=r.solver, k=r.k,
                   trial=r.trial, seed=r.seed, rmse_clean=r.rmse_clean,
                   rmse_noisy=r.rmse_noisy, acc=r.acc, nmi=r.nmi,
                   runtime_ms=r.runtime_ms, input_digest=r.input_digest)

    def to_record(self) -> MetricsReport:
        return MetricsReport(dataset=self.dataset, noise=self.noise, solver=self.solver,
                             k=self.k, trial=self.trial, seed=self.seed,
                             rmse_clean=self.rmse_clean, rmse_noisy=self.rmse_noisy,
                             acc=self.acc, nmi=self.nmi, runtime_ms=self.runtime_ms,
                             input_digest=self.input_digest)


class SummaryRowModel(BaseModel):
    solver: str
    k: int
    metric: str
    mean: float
    std: float


class ExperimentResponse(BaseModel):
    records: list[TrialRecordModel]
    summaries: list[SummaryRowModel]

    @classmethod
    def from_report(cls, report: ExperimentReport) -> "ExperimentResponse":
        return cls(
            records=[TrialRecordModel.from_record(r) for r in report.records],
            summaries=[SummaryRowModel(solver=s.solver, k=s.k, metric=s.metric,
                                       mean=s.mean, std=s.std) for s in report.summaries],
        )

    def to_report(self) -> ExperimentReport:
        return ExperimentReport(
            records=[r.to_record() for r in self.records],
            summaries=[SummaryRow(solver=s.solver, k=s.k, metric=s.metric,
                                  mean=s.mean, std=s.std) for s in self.summaries],
        )


class FactorizeRequest(BaseModel):
    matrix: list[list[float]]
    k: int = Field(ge=1)
    solver: Literal["l1", "l2", "l21"] = "l2"
    lam: float = Field(0.1, gt=0.0)
    max_iters: int = Field(200, ge=1)
    epsilon: float = Field(1e-9, gt=0.0)
    seed: int = 0


class FactorizeResponse(BaseModel):
    basis: list[list[float]]
    coefficients: list[list[float]]
    noise_estimate: Optional[list[list[float]]] = None
    objective_history: list[float]
    iterations_run: int


class HealthResponse(BaseModel):
    status: str
    version: str
