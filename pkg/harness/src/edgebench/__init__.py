"""Comparison harness: train one small CNN on raw vs enhanced datasets."""

__version__ = "0.1.0"

from .datasets import detect_format, load_dataset
from .errors import ConfigError, FormatError
from .experiment import (ExperimentSpec, Report, render_table, run_experiment,
                         write_report)
from .model import SmallCNN, parameter_count
from .svhn import convert_svhn
from .train import TrainConfig, train_and_score

__all__ = [
    "ConfigError",
    "ExperimentSpec",
    "FormatError",
    "Report",
    "SmallCNN",
    "TrainConfig",
    "convert_svhn",
    "detect_format",
    "load_dataset",
    "parameter_count",
    "render_table",
    "run_experiment",
    "train_and_score",
    "write_report",
    "__version__",
]
