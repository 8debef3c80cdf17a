"""Desk-scale patch classifier harness for quantile-banded dataset manifests."""

from .config import TrainConfig, load_config
from .data import EmptySplit, ManifestRow, PatchDataset, UnresolvablePatch, read_manifest
from .model import ToyCnn, build_model
from .report import build_report, write_report
from .train import RunMetrics, train

__version__ = "0.1.0"

__all__ = [
    "EmptySplit",
    "ManifestRow",
    "PatchDataset",
    "RunMetrics",
    "ToyCnn",
    "TrainConfig",
    "UnresolvablePatch",
    "build_model",
    "build_report",
    "load_config",
    "read_manifest",
    "train",
    "write_report",
]
