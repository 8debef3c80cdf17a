"""Trainer CLI: ``train`` fits N instances on a manifest, ``report`` summarizes runs."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import MODELS, load_config
from .report import aggregated_accuracy, build_report, default_aggregate_cmd, write_report
from .train import train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lesiontrainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("train", help="train instances on one dataset manifest")
    fit.add_argument("--manifest", required=True, type=Path)
    fit.add_argument("--index", required=True, type=Path, help="dataset root with index.csv")
    fit.add_argument("--out", required=True, type=Path)
    fit.add_argument("--config", type=Path, help="YAML file mirroring the config fields")
    fit.add_argument("--learning-rate", type=float)
    fit.add_argument("--max-epochs", type=int)
    fit.add_argument("--patience", type=int)
    fit.add_argument("--instances", type=int)
    fit.add_argument("--model", choices=MODELS)
    fit.add_argument("--batch-size", type=int)
    fit.add_argument("--seed", type=int)

    summarize = sub.add_parser("report", help="quantile table over run metrics")
    summarize.add_argument("--runs", required=True, nargs="+", type=Path,
                           help="metrics.json files from train runs")
    summarize.add_argument("--out", required=True, type=Path)
    summarize.add_argument("--aggregate-manifest", type=Path,
                           help="manifest to score predictions against (enables accuracy)")
    summarize.add_argument("--aggregate-cmd", nargs="+",
                           help="command prefix for the aggregation CLI")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            raise
        return 1
    try:
        if args.command == "train":
            config = load_config(
                args.config,
                learning_rate=args.learning_rate,
                max_epochs=args.max_epochs,
                patience=args.patience,
                instances=args.instances,
                model=args.model,
                batch_size=args.batch_size,
                seed=args.seed,
            )
            for instance in range(config.instances):
                run_dir = args.out / f"run_{instance:02d}"
                metrics = train(
                    args.manifest,
                    args.index,
                    config,
                    instance_seed=config.seed + instance,
                    out_dir=run_dir,
                )
                print(
                    f"instance {instance}: {metrics.epochs_run} epochs,"
                    f" best val loss {metrics.best_val_loss:.4f},"
                    f" {metrics.wall_time_s:.1f}s -> {run_dir}"
                )
        elif args.command == "report":
            runs = [json.loads(path.read_text(encoding="utf-8")) for path in args.runs]
            accuracies: dict[str, list[float]] = {}
            if args.aggregate_manifest:
                cmd = args.aggregate_cmd or default_aggregate_cmd()
                for run in runs:
                    accuracy = aggregated_accuracy(
                        args.aggregate_manifest, Path(run["predictions_csv"]), cmd
                    )
                    accuracies.setdefault(run["dataset_id"], []).append(accuracy)
            report = build_report(runs, accuracies or None)
            json_path, csv_path = write_report(report, args.out)
            print(f"wrote {json_path} and {csv_path}")
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
