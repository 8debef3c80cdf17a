"""Per-dataset run summaries: training-time quantiles, epochs, accuracy."""
from __future__ import annotations

import csv
import json
import logging
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

log = logging.getLogger("lesiontrainer")

TIME_QUANTILES = (30, 50, 70)


def default_aggregate_cmd() -> list[str]:
    return [sys.executable, "-m", "patchscore.cli"]


def aggregated_accuracy(
    manifest: Path, predictions_csv: Path, aggregate_cmd: list[str] | None = None
) -> float:
    """Score one run's predictions through the preprocessing tool's CLI."""
    cmd = list(aggregate_cmd or default_aggregate_cmd())
    with tempfile.TemporaryDirectory() as scratch:
        subprocess.run(
            cmd
            + [
                "aggregate",
                "--manifest",
                str(manifest),
                "--predictions",
                str(predictions_csv),
                "--out",
                scratch,
            ],
            check=True,
            capture_output=True,
            text=True,
        )
        payload = json.loads((Path(scratch) / "aggregate_report.json").read_text())
    return payload["accuracy_pct"]


def build_report(runs: list[dict], accuracies: dict[str, list[float]] | None = None) -> dict:
    """Collapse run metrics into per-dataset quantile rows.

    Wall-time quantiles are the 30th/50th/70th percentiles with linear
    interpolation. Datasets with no runs simply do not appear; an empty run
    list yields an empty report (with a warning).
    """
    if not runs:
        log.warning("no runs supplied; report is empty")
        return {"datasets": {}}
    by_dataset: dict[str, list[dict]] = {}
    for run in runs:
        by_dataset.setdefault(run["dataset_id"], []).append(run)
    datasets = {}
    for dataset_id in sorted(by_dataset):
        dataset_runs = by_dataset[dataset_id]
        times = [run["wall_time_s"] for run in dataset_runs]
        quantiles = {
            f"wall_time_p{q}_s": float(np.percentile(times, q)) for q in TIME_QUANTILES
        }
        entry = {
            "instances": len(dataset_runs),
            **quantiles,
            "mean_epochs": float(np.mean([run["epochs_run"] for run in dataset_runs])),
            "mean_loop_time_s": float(np.mean([run["loop_time_s"] for run in dataset_runs])),
        }
        if accuracies and dataset_id in accuracies:
            values = accuracies[dataset_id]
            entry["accuracy_pct_values"] = values
            entry["accuracy_pct_mean"] = float(np.mean(values))
        datasets[dataset_id] = entry
    return {"datasets": datasets}


def write_report(report: dict, out_dir: Path) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / "report.json"
    json_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    csv_path = out_dir / "report.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["dataset_id", "instances", "wall_time_p30_s", "wall_time_p50_s",
             "wall_time_p70_s", "mean_epochs", "accuracy_pct_mean"]
        )
        for dataset_id, entry in report["datasets"].items():
            writer.writerow(
                [
                    dataset_id,
                    entry["instances"],
                    f"{entry['wall_time_p30_s']:.6f}",
                    f"{entry['wall_time_p50_s']:.6f}",
                    f"{entry['wall_time_p70_s']:.6f}",
                    f"{entry['mean_epochs']:.2f}",
                    f"{entry['accuracy_pct_mean']:.1f}" if "accuracy_pct_mean" in entry else "",
                ]
            )
    return json_path, csv_path
