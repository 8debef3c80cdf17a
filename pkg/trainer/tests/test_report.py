"""Quantile reporter against a direct percentile oracle."""
import numpy as np

from lesiontrainer.report import build_report, write_report


def run(dataset_id, wall_time, epochs=5):
    return {
        "dataset_id": dataset_id,
        "wall_time_s": wall_time,
        "loop_time_s": wall_time * 0.9,
        "epochs_run": epochs,
    }


def test_three_run_quantiles():
    report = build_report([run("d", 10.0), run("d", 20.0), run("d", 30.0)])
    entry = report["datasets"]["d"]
    assert abs(entry["wall_time_p30_s"] - 16.0) < 1e-9
    assert abs(entry["wall_time_p50_s"] - 20.0) < 1e-9
    assert abs(entry["wall_time_p70_s"] - 24.0) < 1e-9


def test_single_run_quantiles_collapse():
    entry = build_report([run("d", 12.5)])["datasets"]["d"]
    assert entry["wall_time_p30_s"] == entry["wall_time_p50_s"] == entry["wall_time_p70_s"] == 12.5


def test_matches_percentile_oracle_on_random_runs():
    rng = np.random.default_rng(17)
    for _ in range(50):
        times = rng.uniform(1, 1000, size=int(rng.integers(1, 20))).tolist()
        entry = build_report([run("d", t) for t in times])["datasets"]["d"]
        for q in (30, 50, 70):
            assert abs(entry[f"wall_time_p{q}_s"] - float(np.percentile(times, q))) < 1e-9


def test_empty_run_list_yields_empty_report(caplog):
    report = build_report([])
    assert report == {"datasets": {}}
    assert any("no runs" in message for message in caplog.messages)


def test_mean_epochs_and_accuracy(tmp_path):
    runs = [run("d", 10.0, epochs=4), run("d", 20.0, epochs=6)]
    report = build_report(runs, accuracies={"d": [100.0, 50.0]})
    entry = report["datasets"]["d"]
    assert entry["mean_epochs"] == 5.0
    assert entry["accuracy_pct_mean"] == 75.0
    json_path, csv_path = write_report(report, tmp_path)
    assert json_path.is_file()
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("dataset_id,")
    assert lines[1].endswith(",75.0")
