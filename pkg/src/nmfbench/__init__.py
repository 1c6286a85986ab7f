"""Noise-robustness benchmark for multiplicative-update NMF solvers."""

__version__ = "0.1.0"

from .datasets import Dataset, load_image_dataset, normalize, subsample, synthesize_dataset
from .harness import (
    DirectorySource,
    ExperimentConfig,
    ExperimentError,
    ExperimentReport,
    SummaryRow,
    SyntheticSource,
    run_experiment,
    run_trial,
    summarize,
    write_csv,
)
from .metrics import MetricsReport, accuracy, align_labels, kmeans, nmi, rmse
from .noise import NoiseSpec, add_block_occlusion, add_salt_pepper, apply_noise
from .solvers import (
    FactorizationResult,
    SolverConfig,
    init_factors,
    reconstruct,
    solve_l1,
    solve_l2,
    solve_l21,
)
from .svgplot import emit_plot_data

__all__ = [
    "__version__",
    "Dataset", "load_image_dataset", "normalize", "subsample", "synthesize_dataset",
    "NoiseSpec", "add_block_occlusion", "add_salt_pepper", "apply_noise",
    "SolverConfig", "FactorizationResult", "init_factors", "reconstruct",
    "solve_l1", "solve_l2", "solve_l21",
    "MetricsReport", "rmse", "kmeans", "align_labels", "accuracy", "nmi",
    "ExperimentConfig", "ExperimentReport", "ExperimentError", "SummaryRow",
    "SyntheticSource", "DirectorySource",
    "run_trial", "run_experiment", "summarize", "write_csv", "emit_plot_data",
]
