"""Subcommand CLI: extract, score, select, aggregate, bench, fetch.

Exit codes: 0 success, 1 validation error (including bad arguments), 2 I/O
error, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import pipeline
from .errors import PatchscoreError
from .imaging import PATCH_SIDES
from .ingestion import fetch_remote
from .version import TOOL

ENDPOINT_ENV = "PATCHSCORE_ENDPOINT"


def _quantile(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 0.5:
        raise argparse.ArgumentTypeError(f"quantile must be in (0, 0.5), got {text}")
    return value


def _coverage(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"coverage threshold must be in (0, 1], got {text}")
    return value


def _sides(text: str) -> tuple[int, ...]:
    try:
        sides = tuple(int(part) for part in text.split(",") if part)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad side list {text!r}")
    bad = [s for s in sides if s not in PATCH_SIDES]
    if bad or not sides:
        raise argparse.ArgumentTypeError(f"sides must come from {PATCH_SIDES}, got {text!r}")
    return sides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patchscore", description=__doc__)
    parser.add_argument("--version", action="version", version=TOOL)
    sub = parser.add_subparsers(dest="command", required=True)

    extract = sub.add_parser("extract", help="tile masked ROIs into square patches")
    extract.add_argument("--index", required=True, type=Path, help="dataset root containing index.csv")
    extract.add_argument("--out", required=True, type=Path, help="patch store directory")
    extract.add_argument("--sides", type=_sides, default=PATCH_SIDES, help="comma-separated patch sides")
    extract.add_argument("--coverage-threshold", type=_coverage, default=0.5,
                         help="minimum masked fraction for a grid cell (default 0.5)")
    extract.add_argument("--threads", type=int, default=1)

    score = sub.add_parser("score", help="score stored patches with one criterion")
    score.add_argument("--store", required=True, type=Path)
    score.add_argument("--criterion", required=True, choices=("entropy", "memd"))
    score.add_argument("--threads", type=int, default=1)

    select = sub.add_parser("select", help="build quantile-band dataset manifests")
    select.add_argument("--store", required=True, type=Path)
    select.add_argument("--criterion", required=True, choices=("entropy", "memd"))
    select.add_argument("--band", required=True, choices=("low", "high"))
    select.add_argument("--quantile", type=_quantile, default=0.15)
    select.add_argument("--seed", type=int, default=0)
    select.add_argument("--sides", type=_sides, default=None)

    agg = sub.add_parser("aggregate", help="fold patch predictions into image verdicts")
    agg.add_argument("--manifest", required=True, type=Path)
    agg.add_argument("--predictions", required=True, type=Path)
    agg.add_argument("--out", required=True, type=Path)

    bench = sub.add_parser("bench", help="time per-image scoring")
    bench.add_argument("--store", required=True, type=Path)
    bench.add_argument("--criterion", required=True, choices=("entropy", "memd"))
    bench.add_argument("--repetitions", type=int, default=3)
    bench.add_argument("--out", type=Path, default=None)

    fetch = sub.add_parser("fetch", help="download images/masks/labels from an archive endpoint")
    fetch.add_argument("--ids", help="comma-separated image ids")
    fetch.add_argument("--ids-file", type=Path, help="file with one image id per line")
    fetch.add_argument("--endpoint", default=os.environ.get(ENDPOINT_ENV),
                       help=f"archive base URL (or ${ENDPOINT_ENV})")
    fetch.add_argument("--dest", required=True, type=Path)
    fetch.add_argument("--concurrency", type=int, default=4)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            raise
        return 1  # argument problems are validation errors
    try:
        if args.command == "extract":
            report = pipeline.run_extract(
                args.index, args.out, args.sides, args.coverage_threshold, args.threads
            )
            for side, info in report["sides"].items():
                print(f"side {side}: {info['patch_count']} patches from {info['image_count']} images")
        elif args.command == "score":
            report = pipeline.run_score(args.store, args.criterion, args.threads)
            for side, info in report["sides"].items():
                print(f"side {side}: scored {info['patches']} patches ({args.criterion})")
        elif args.command == "select":
            paths = pipeline.run_select(
                args.store, args.criterion, args.band, args.quantile, args.seed, args.sides
            )
            for path in paths:
                print(path)
        elif args.command == "aggregate":
            report = pipeline.run_aggregate(args.manifest, args.predictions, args.out)
            accuracy = report["accuracy_pct"]
            print(
                f"{report['correct']}/{report['test_images']} test images correct"
                + (f" ({accuracy:.1f}%)" if accuracy is not None else "")
            )
        elif args.command == "bench":
            report = pipeline.run_bench(args.store, args.criterion, args.repetitions, args.out)
            print(json.dumps({"criterion": report["criterion"], "total_pairs": report["total_pairs"],
                              "images": len(report["images"])}))
        elif args.command == "fetch":
            ids = []
            if args.ids:
                ids.extend(part.strip() for part in args.ids.split(",") if part.strip())
            if args.ids_file:
                ids.extend(
                    line.strip() for line in args.ids_file.read_text().splitlines() if line.strip()
                )
            if not args.endpoint:
                print(f"no endpoint given (use --endpoint or ${ENDPOINT_ENV})", file=sys.stderr)
                return 1
            result = fetch_remote(ids, args.endpoint, args.dest, args.concurrency)
            for image_id in sorted(result.statuses):
                print(f"{image_id}: {result.statuses[image_id]}")
            print(f"{len(result.index)} images indexed at {args.dest}")
    except PatchscoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - invariant violations exit 3
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
