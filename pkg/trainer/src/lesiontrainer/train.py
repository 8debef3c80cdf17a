"""Training loop: Adam + binary cross-entropy, early stopping on val loss."""
from __future__ import annotations

import copy
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import torch
from torch import nn
from torch.utils.data import DataLoader

from .config import TrainConfig
from .data import PatchDataset, read_index, read_manifest, split_rows, write_predictions
from .model import build_model

log = logging.getLogger("lesiontrainer")


@dataclass
class RunMetrics:
    dataset_id: str
    instance_seed: int
    wall_time_s: float
    loop_time_s: float
    epochs_run: int
    best_val_loss: float
    test_patches: int
    batch_size: int
    model: str
    pixel_scaling: str = "unit_interval"
    predictions_csv: str = ""
    predictions: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        payload = asdict(self)
        payload.pop("predictions")  # stored separately as CSV
        return payload


def _seed_everything(seed: int):
    torch.manual_seed(seed)
    torch.use_deterministic_algorithms(True)


def _epoch_loss(model: nn.Module, loader: DataLoader, loss_fn) -> float:
    model.eval()
    total, count = 0.0, 0
    with torch.no_grad():
        for batch, labels in loader:
            total += float(loss_fn(model(batch), labels)) * labels.shape[0]
            count += labels.shape[0]
    return total / count


def train(
    manifest_path: str | Path,
    index_root: str | Path,
    config: TrainConfig,
    instance_seed: int | None = None,
    out_dir: str | Path | None = None,
) -> RunMetrics:
    """Train one model instance on a manifest; returns metrics + predictions.

    Fits with Adam at the configured learning rate under binary cross-entropy,
    stops early when validation loss has not decreased for ``patience``
    consecutive epochs, restores the best-validation weights, and thresholds
    sigmoid outputs at 0.5 (boundary up) for the test-split predictions.
    """
    started = time.perf_counter()
    seed = config.seed if instance_seed is None else instance_seed
    _seed_everything(seed)

    header, rows = read_manifest(manifest_path)
    groups = split_rows(rows)
    image_paths = read_index(index_root)
    datasets = {name: PatchDataset(group, image_paths) for name, group in groups.items()}
    train_loader = DataLoader(
        datasets["train"],
        batch_size=config.batch_size,
        shuffle=True,
        num_workers=0,
        generator=torch.Generator().manual_seed(seed),
    )
    val_loader = DataLoader(datasets["val"], batch_size=config.batch_size, num_workers=0)
    test_loader = DataLoader(datasets["test"], batch_size=config.batch_size, num_workers=0)

    model = build_model(config.model)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.BCEWithLogitsLoss()

    best_val = float("inf")
    best_state = copy.deepcopy(model.state_dict())
    bad_epochs = 0
    epochs_run = 0
    loop_started = time.perf_counter()
    for epoch in range(1, config.max_epochs + 1):
        model.train()
        for batch, labels in train_loader:
            optimizer.zero_grad()
            loss = loss_fn(model(batch), labels)
            loss.backward()
            optimizer.step()
        epochs_run = epoch
        val_loss = _epoch_loss(model, val_loader, loss_fn)
        if val_loss < best_val:
            best_val = val_loss
            best_state = copy.deepcopy(model.state_dict())
            bad_epochs = 0
        else:
            bad_epochs += 1
        log.info("epoch %d: val loss %.6f (best %.6f)", epoch, val_loss, best_val)
        if bad_epochs >= config.patience:
            log.info("early stop after %d epochs", epoch)
            break
    loop_time = time.perf_counter() - loop_started

    model.load_state_dict(best_state)
    model.eval()
    predictions: dict[str, int] = {}
    with torch.no_grad():
        offset = 0
        for batch, _ in test_loader:
            probs = torch.sigmoid(model(batch))
            for prob in probs.reshape(-1).tolist():
                row = groups["test"][offset]
                predictions[row.patch_id] = 1 if prob >= 0.5 else 0
                offset += 1

    dataset_id = Path(manifest_path).stem
    metrics = RunMetrics(
        dataset_id=dataset_id,
        instance_seed=seed,
        wall_time_s=time.perf_counter() - started,
        loop_time_s=loop_time,
        epochs_run=epochs_run,
        best_val_loss=best_val,
        test_patches=len(predictions),
        batch_size=config.batch_size,
        model=config.model,
        predictions=predictions,
    )
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        metrics.predictions_csv = str(write_predictions(out_dir / "predictions.csv", predictions))
        (out_dir / "metrics.json").write_text(
            json.dumps(metrics.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return metrics
