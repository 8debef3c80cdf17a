"""End-to-end orchestration of extract / score / select / aggregate / bench.

Per-image work runs on a bounded thread pool; results are collected in memory
and written through a single sorted pass so outputs are canonical regardless
of scheduling or worker count.
"""
from __future__ import annotations

import logging
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import store
from .aggregation import PatchPredictions, aggregate
from .entropy import histogram, shannon_entropy
from .errors import EmptyMask, MissingPrediction, UnknownPatch
from .imaging import PatchRecord, crop, load_gray, load_mask, tile_roi
from .ingestion import load_index
from .memd import MemdInstrumentation, per_patch_memd
from .selection import ScoreTable, SelectionSpec, assign_splits, balance_classes, select_band
from .version import TOOL

log = logging.getLogger("patchscore")


def _pool_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_extract(
    index_root: Path,
    out_dir: Path,
    sides: tuple[int, ...],
    coverage_threshold: float = 0.5,
    threads: int = 1,
) -> dict:
    """Tile every usable image's ROI and persist the per-side patch stores."""
    index = load_index(index_root)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sides = tuple(sorted(set(int(s) for s in sides)))

    def tile_one(record):
        if record.mask_path is None:
            return record.image_id, "no_mask", {}
        mask = load_mask(record.mask_path)
        try:
            origins = {side: tile_roi(mask, side, coverage_threshold) for side in sides}
        except EmptyMask:
            return record.image_id, "empty_mask", {}
        return record.image_id, "ok", origins

    results = _pool_map(tile_one, index.records, threads)
    skipped_no_mask = sorted(i for i, status, _ in results if status == "no_mask")
    skipped_empty_mask = sorted(i for i, status, _ in results if status == "empty_mask")
    by_side: dict[int, dict[str, list[tuple[int, int]]]] = {side: {} for side in sides}
    for image_id, status, origins in results:
        if status != "ok":
            continue
        for side, cells in origins.items():
            if cells:
                by_side[side][image_id] = cells

    side_reports = {}
    for side in sides:
        store.write_patches(out_dir, side, by_side[side])
        tiled_ids = set(by_side[side])
        skipped = sorted(
            i for i, status, _ in results if status == "ok" and i not in tiled_ids
        )
        side_reports[str(side)] = {
            "patch_count": sum(len(v) for v in by_side[side].values()),
            "image_count": len(by_side[side]),
            "skipped_no_patches": skipped,
        }
        log.info("side %d: %d patches from %d images", side, side_reports[str(side)]["patch_count"], len(by_side[side]))

    store.write_store_meta(out_dir, Path(index_root), coverage_threshold, sides)
    report = {
        "tool_version": TOOL,
        "coverage_threshold": coverage_threshold,
        "images": len(index),
        "skipped_no_mask": skipped_no_mask,
        "skipped_empty_mask": skipped_empty_mask,
        "sides": side_reports,
    }
    store.write_json(out_dir / store.EXTRACT_REPORT_NAME, report)
    return report


def _score_image(gray, origins, side: int, criterion: str) -> list[float]:
    crops = [crop(gray, origin, side) for origin in origins]
    if criterion == "entropy":
        return [shannon_entropy(histogram(patch)) for patch in crops]
    return per_patch_memd(crops)


def run_score(store_dir: Path, criterion: str, threads: int = 1) -> dict:
    """Score every stored patch and export per-side score distributions."""
    store_dir = Path(store_dir)
    meta = store.read_store_meta(store_dir)
    index = load_index(meta.index_root)
    records = index.by_id()
    side_reports = {}
    for side in meta.sides:
        per_image = store.read_patches(store_dir, side)

        def score_one(item):
            image_id, origins = item
            gray = load_gray(records[image_id].image_path)
            return image_id, origins, _score_image(gray, origins, side, criterion)

        results = _pool_map(score_one, sorted(per_image.items()), threads)
        tables = {
            image_id: [
                (index_, x, y, score)
                for index_, ((x, y), score) in enumerate(zip(origins, scores))
            ]
            for image_id, origins, scores in results
        }
        store.write_scores(store_dir, criterion, side, tables)
        all_scores = [score for _, _, scores in results for score in scores]
        store.write_histogram(store_dir, criterion, side, all_scores)
        side_reports[str(side)] = {"patches": len(all_scores), "images": len(tables)}
        log.info("scored %d %s patches at side %d", len(all_scores), criterion, side)
    return {"criterion": criterion, "sides": side_reports}


def run_select(
    store_dir: Path,
    criterion: str,
    band: str,
    quantile: float,
    seed: int,
    sides: tuple[int, ...] | None = None,
) -> list[Path]:
    """Build one manifest per side: class-balanced, split, quantile-banded."""
    store_dir = Path(store_dir)
    meta = store.read_store_meta(store_dir)
    spec = SelectionSpec(criterion=criterion, band=band, quantile=quantile)
    index = load_index(meta.index_root)
    records = index.by_id()
    balanced = balance_classes(
        [(r.image_id, r.label, r.has_mask) for r in index.records], seed
    )
    splits = assign_splits(balanced, seed)
    paths = []
    for side in sides or meta.sides:
        tables = store.read_scores(store_dir, criterion, side)
        manifest_records = []
        for image_id in balanced:
            rows = tables.get(image_id)
            if not rows:
                continue  # no patches at this side
            table = ScoreTable(
                image_id=image_id,
                criterion=criterion,
                entries=tuple((index_, score) for index_, _, _, score in rows),
            )
            keep = set(select_band(table, spec))
            split = splits.split_of(image_id)
            label = records[image_id].label
            for index_, x, y, score in rows:
                if index_ not in keep:
                    continue
                manifest_records.append(
                    PatchRecord(
                        image_id=image_id,
                        origin_x=x,
                        origin_y=y,
                        side=side,
                        label=label,
                        entropy=score if criterion == "entropy" else None,
                        memd_mean=score if criterion == "memd" else None,
                        split=split,
                    )
                )
        header = store.ManifestHeader(
            criterion=criterion, band=band, quantile=quantile, side=side, seed=seed
        )
        path = store.manifest_path(store_dir, criterion, band, quantile, side)
        store.write_manifest(path, header, manifest_records)
        log.info("manifest %s: %d patches", path.name, len(manifest_records))
        paths.append(path)
    return paths


def run_aggregate(manifest_path: Path, predictions_path: Path, out_dir: Path) -> dict:
    """Fold per-patch predictions into image verdicts and score accuracy."""
    header, records = store.read_manifest(manifest_path)
    predictions = store.read_predictions(predictions_path)
    test_records = [r for r in records if r.split == "test"]
    test_ids = {r.patch_id for r in test_records}
    unknown = sorted(set(predictions) - test_ids)
    if unknown:
        raise UnknownPatch(f"predictions reference non-test patches: {unknown[:5]}")
    missing = sorted(pid for pid in test_ids if pid not in predictions)
    if missing:
        raise MissingPrediction(f"missing predictions for test patches: {missing[:5]}")

    by_image: dict[str, list[PatchRecord]] = {}
    for record in test_records:
        by_image.setdefault(record.image_id, []).append(record)
    rows = []
    correct = 0
    for image_id in sorted(by_image):
        patches = by_image[image_id]
        verdict = aggregate(
            PatchPredictions(
                image_id=image_id,
                preds=tuple(predictions[p.patch_id] for p in patches),
            )
        )
        label = patches[0].label
        correct += int(verdict.verdict == label)
        rows.append((image_id, label, verdict.verdict, verdict.mean_score))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    store.write_verdicts(out_dir / "verdicts.csv", rows)
    n_images = len(rows)
    report = {
        "manifest": Path(manifest_path).name,
        "criterion": header.criterion,
        "band": header.band,
        "side": header.side,
        "test_images": n_images,
        "correct": correct,
        "accuracy_pct": round(100.0 * correct / n_images, 1) if n_images else None,
    }
    store.write_json(out_dir / "aggregate_report.json", report)
    return report


def run_bench(store_dir: Path, criterion: str, repetitions: int = 3, out_path: Path | None = None) -> dict:
    """Time per-image scoring; reports pair counts and pairs per second."""
    store_dir = Path(store_dir)
    meta = store.read_store_meta(store_dir)
    index = load_index(meta.index_root)
    records = index.by_id()
    images = []
    for side in meta.sides:
        per_image = store.read_patches(store_dir, side)
        for image_id in sorted(per_image):
            origins = per_image[image_id]
            gray = load_gray(records[image_id].image_path)
            crops = [crop(gray, origin, side) for origin in origins]
            samples = []
            pairs = len(crops) * (len(crops) - 1) // 2
            for _ in range(repetitions):
                instrumentation = MemdInstrumentation()
                started = time.perf_counter()
                if criterion == "entropy":
                    for patch in crops:
                        shannon_entropy(histogram(patch))
                else:
                    per_patch_memd(crops, instrumentation)
                    pairs = instrumentation.pair_evaluations
                samples.append(time.perf_counter() - started)
            median = statistics.median(samples)
            images.append(
                {
                    "image_id": image_id,
                    "side": side,
                    "patches": len(crops),
                    "pairs": pairs,
                    "samples_s": samples,
                    "median_s": median,
                    "pairs_per_s": pairs / median if median > 0 and pairs else None,
                }
            )
    report = {
        "criterion": criterion,
        "repetitions": repetitions,
        "images": images,
        "total_pairs": sum(i["pairs"] for i in images),
    }
    store.write_json(out_path or store_dir / f"bench_{criterion}.json", report)
    return report
