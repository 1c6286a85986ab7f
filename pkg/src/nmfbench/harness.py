"""Benchmark-protocol orchestration.

Per (solver, k) pair the harness runs a number of trials; every trial
subsamples the dataset, corrupts the subsample, factorizes the corrupted
matrix, clusters the per-sample representation, and scores against the
clean subsample.  All solvers and all k in the same trial index consume
the identical subsample and corrupted matrix, so solver comparisons are
paired.  Summaries use the population (divide-by-N) standard deviation.
"""

from __future__ import annotations

import csv
import hashlib
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Union

import numpy as np

from .datasets import Dataset, load_image_dataset, subsample, synthesize_dataset
from .metrics import MetricsReport, accuracy, kmeans_best_of, nmi, rmse
from .noise import NoiseSpec, apply_noise
from .solvers import FactorizationResult, SolverConfig, reconstruct, solve_l1, solve_l2, solve_l21

SOLVER_NAMES = ("l1", "l2", "l21")

CLUSTER_INPUTS = ("coefficients", "reconstruction")

RECORDS_HEADER = (
    "dataset", "noise", "solver", "k", "trial", "seed",
    "rmse_clean", "rmse_noisy", "acc", "nmi", "runtime_ms",
)
SUMMARY_HEADER = ("solver", "k", "metric", "mean", "std")
SUMMARY_METRICS = ("rmse", "acc", "nmi")


@dataclass(frozen=True)
class SyntheticSource:
    """Synthetic dataset descriptor (prototype images, see datasets)."""

    n_subjects: int = 20
    per_subject: int = 10
    height: int = 24
    width: int = 20
    noise_scale: float = 0.15
    seed: int = 0
    name: str = "synthetic"


@dataclass(frozen=True)
class DirectorySource:
    """On-disk dataset descriptor: a root of per-subject PGM directories."""

    path: str
    reduce: int = 1
    name: str = "images"


DatasetSource = Union[SyntheticSource, DirectorySource]


def load_source(source: DatasetSource) -> Dataset:
    if isinstance(source, SyntheticSource):
        return synthesize_dataset(
            source.n_subjects, source.per_subject, source.height, source.width,
            noise_scale=source.noise_scale, seed=source.seed,
        )
    if isinstance(source, DirectorySource):
        return load_image_dataset(source.path, reduce=source.reduce)
    raise TypeError(f"unknown dataset source {type(source).__name__}")


@dataclass
class ExperimentConfig:
    dataset: DatasetSource
    noise: NoiseSpec = NoiseSpec()
    solvers: tuple[str, ...] = SOLVER_NAMES
    ks: tuple[int, ...] = (10, 20, 30, 40)
    lam: float = 0.1
    train_fraction: float = 0.9
    trials: int = 5
    max_iters: int = 200
    base_seed: int = 0
    output_dir: str = "results"
    cluster_on: str = "coefficients"
    epsilon: float = 1e-9

    def __post_init__(self):
        self.solvers = tuple(self.solvers)
        self.ks = tuple(int(k) for k in self.ks)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.ks:
            raise ValueError("at least one k is required")
        if any(k < 1 for k in self.ks):
            raise ValueError("every k must be >= 1")
        if not 0.0 < self.train_fraction <= 1.0:
            raise ValueError("train_fraction must lie in (0, 1]")
        if not self.solvers:
            raise ValueError("at least one solver is required")
        unknown = [s for s in self.solvers if s not in SOLVER_NAMES]
        if unknown:
            raise ValueError(f"unknown solvers: {unknown}")
        if self.cluster_on not in CLUSTER_INPUTS:
            raise ValueError(f"cluster_on must be one of {CLUSTER_INPUTS}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.lam <= 0.0:
            raise ValueError("lambda must be positive")


@dataclass(frozen=True)
class SummaryRow:
    solver: str
    k: int
    metric: str
    mean: float
    std: float


@dataclass
class ExperimentReport:
    records: list[MetricsReport] = field(default_factory=list)
    summaries: list[SummaryRow] = field(default_factory=list)


class ExperimentError(RuntimeError):
    """A trial failed; carries the records completed before the failure."""

    def __init__(self, message: str, records: list[MetricsReport]):
        super().__init__(message)
        self.records = list(records)


def _run_solver(solver: str, X: np.ndarray, k: int, lam: float,
                cfg: SolverConfig) -> FactorizationResult:
    if solver == "l2":
        return solve_l2(X, k, cfg)
    if solver == "l21":
        return solve_l21(X, k, cfg)
    if solver == "l1":
        return solve_l1(X, k, lam=lam, cfg=cfg)
    raise ValueError(f"unknown solver {solver!r}")


def run_trial(
    ds: Dataset,
    noise: NoiseSpec,
    solver: str,
    k: int,
    lam: float,
    cfg: SolverConfig,
    trial_seed: int,
    train_fraction: float = 0.9,
    trial: int = 0,
    cluster_on: str = "coefficients",
    dataset_name: str = "dataset",
) -> MetricsReport:
    """One protocol trial; a pure function of its inputs except runtime_ms.

    Seed derivation: the subsample uses trial_seed, the corruption
    noise.seed + trial_seed, factor initialization cfg.seed + trial_seed
    and k-means trial_seed.  None of those depend on solver or k, so all
    runs sharing a trial_seed see the same corrupted matrix.
    """
    sub = subsample(ds, train_fraction, seed=trial_seed)
    trial_noise = replace(noise, seed=noise.seed + trial_seed)
    X_noisy, _ = apply_noise(sub, trial_noise)
    digest = hashlib.sha256(X_noisy.tobytes()).hexdigest()[:16]

    solver_cfg = replace(cfg, seed=cfg.seed + trial_seed)
    start = time.perf_counter()
    result = _run_solver(solver, X_noisy, k, lam, solver_cfg)
    runtime_ms = int((time.perf_counter() - start) * 1000)

    recon = reconstruct(result)
    points = result.H.T if cluster_on == "coefficients" else recon.T
    n_clusters = int(np.unique(sub.labels).size)
    # best of 10 seeded restarts, matching the usual evaluation practice
    pred = kmeans_best_of(points, n_clusters, seed=trial_seed)
    return MetricsReport(
        dataset=dataset_name,
        noise=noise.kind,
        solver=solver,
        k=k,
        trial=trial,
        seed=trial_seed,
        rmse_clean=rmse(sub.X, recon),
        rmse_noisy=rmse(X_noisy, recon),
        acc=accuracy(sub.labels, pred),
        nmi=nmi(sub.labels, pred),
        runtime_ms=runtime_ms,
        input_digest=digest,
    )


def summarize(records: list[MetricsReport]) -> list[SummaryRow]:
    """Mean and population std of rmse (clean target), acc and nmi per
    (solver, k), in first-appearance order."""
    groups: dict[tuple[str, int], list[MetricsReport]] = {}
    for rec in records:
        groups.setdefault((rec.solver, rec.k), []).append(rec)
    rows = []
    for (solver, k), recs in groups.items():
        for metric, pick in (
            ("rmse", lambda r: r.rmse_clean),
            ("acc", lambda r: r.acc),
            ("nmi", lambda r: r.nmi),
        ):
            values = np.array([pick(r) for r in recs], dtype=float)
            rows.append(SummaryRow(solver=solver, k=k, metric=metric,
                                   mean=float(values.mean()), std=float(values.std())))
    return rows


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run the full (solver, k, trial) grid and aggregate.

    Trial seeds are base_seed + trial index.  A failing trial aborts the
    experiment with an ExperimentError carrying the completed records.
    """
    ds = load_source(cfg.dataset)
    dataset_name = cfg.dataset.name
    solver_cfg = SolverConfig(max_iters=cfg.max_iters, epsilon=cfg.epsilon, seed=0)
    records: list[MetricsReport] = []
    for solver in cfg.solvers:
        for k in cfg.ks:
            for t in range(cfg.trials):
                try:
                    rec = run_trial(
                        ds, cfg.noise, solver, k, cfg.lam, solver_cfg,
                        trial_seed=cfg.base_seed + t,
                        train_fraction=cfg.train_fraction,
                        trial=t,
                        cluster_on=cfg.cluster_on,
                        dataset_name=dataset_name,
                    )
                except Exception as exc:
                    raise ExperimentError(
                        f"trial {t} of solver {solver!r} at k={k} failed: {exc}",
                        records,
                    ) from exc
                records.append(rec)
    return ExperimentReport(records=records, summaries=summarize(records))


def format_real(x: float) -> str:
    """Serialize a real with 6 significant digits (idempotent on reparse)."""
    return format(float(x), ".6g")


def write_csv(report: ExperimentReport, out_dir: str | Path) -> None:
    """Write records.csv and summary.csv under out_dir (RFC 4180)."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "records.csv", "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(RECORDS_HEADER)
            for r in report.records:
                writer.writerow([
                    r.dataset, r.noise, r.solver, r.k, r.trial, r.seed,
                    format_real(r.rmse_clean), format_real(r.rmse_noisy),
                    format_real(r.acc), format_real(r.nmi), r.runtime_ms,
                ])
        with open(out / "summary.csv", "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(SUMMARY_HEADER)
            for s in report.summaries:
                writer.writerow([s.solver, s.k, s.metric,
                                 format_real(s.mean), format_real(s.std)])
    except OSError as exc:
        raise OSError(f"cannot write results under {out}: {exc}") from exc
