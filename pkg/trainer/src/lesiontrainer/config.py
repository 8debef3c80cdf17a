"""Training configuration, loadable from YAML with flag overrides."""
from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

import yaml

MODELS = ("toy-cnn", "resnet50-adapted")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.001
    max_epochs: int = 10
    patience: int = 3
    instances: int = 2  # 10 at full scale
    model: str = "toy-cnn"
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if self.patience >= self.max_epochs:
            raise ValueError("patience must be smaller than max epochs")
        if self.max_epochs < 1 or self.instances < 1 or self.batch_size < 1:
            raise ValueError("epochs, instances and batch size must be >= 1")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")


def load_config(yaml_path: str | Path | None = None, **overrides) -> TrainConfig:
    """Build a TrainConfig from an optional YAML file plus keyword overrides."""
    values = {}
    if yaml_path is not None:
        payload = yaml.safe_load(Path(yaml_path).read_text(encoding="utf-8")) or {}
        if not isinstance(payload, dict):
            raise ValueError(f"{yaml_path}: expected a mapping")
        known = {f.name for f in fields(TrainConfig)}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"{yaml_path}: unknown config keys {sorted(unknown)}")
        values.update(payload)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return TrainConfig(**values)
