"""Trainer CLI round trip and model variants."""
import json

import torch

from lesiontrainer.cli import main
from lesiontrainer.model import build_model

from test_train_acceptance import conflicted_corpus


def test_train_and_report_round_trip(tmp_path):
    manifest = conflicted_corpus(tmp_path)
    out = tmp_path / "runs"
    config = tmp_path / "config.yaml"
    config.write_text("batch_size: 8\nmax_epochs: 6\npatience: 2\n")
    code = main(
        ["train", "--manifest", str(manifest), "--index", str(tmp_path),
         "--out", str(out), "--config", str(config), "--instances", "2", "--seed", "4"]
    )
    assert code == 0
    metrics_files = sorted(out.glob("run_*/metrics.json"))
    assert len(metrics_files) == 2
    payloads = [json.loads(path.read_text()) for path in metrics_files]
    assert {p["instance_seed"] for p in payloads} == {4, 5}
    assert all(p["epochs_run"] <= 6 for p in payloads)
    assert all(p["loop_time_s"] <= p["wall_time_s"] for p in payloads)

    report_dir = tmp_path / "report"
    code = main(
        ["report", "--runs", *map(str, metrics_files), "--out", str(report_dir),
         "--aggregate-manifest", str(manifest)]
    )
    assert code == 0
    report = json.loads((report_dir / "report.json").read_text())
    entry = report["datasets"]["manifest"]
    assert entry["instances"] == 2
    assert "accuracy_pct_mean" in entry
    assert (report_dir / "report.csv").is_file()


def test_bad_config_is_validation_error(tmp_path):
    config = tmp_path / "c.yaml"
    config.write_text("patience: 12\n")  # >= max_epochs
    code = main(
        ["train", "--manifest", str(tmp_path / "m.csv"), "--index", str(tmp_path),
         "--out", str(tmp_path / "o"), "--config", str(config)]
    )
    assert code == 1


def test_resnet_variant_builds_and_scores():
    model = build_model("resnet50-adapted")
    with torch.no_grad():
        logits = model(torch.zeros(2, 3, 32, 32))
    assert logits.shape == (2,)
