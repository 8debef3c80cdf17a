"""On-disk formats for the pipeline.

The patch store keeps coordinates only, never pixel crops; patches are
re-cropped on demand. All CSVs use a fixed column order with scores printed
as 6-decimal fixed point and rows sorted by image id then patch order, so
identical inputs produce byte-identical files. Reports and histograms are
canonical JSON (sorted keys, 2-space indent, trailing newline).
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MalformedRow
from .imaging import PatchRecord
from .version import TOOL

STORE_META_NAME = "store.json"
EXTRACT_REPORT_NAME = "extract_report.json"

MANIFEST_COLUMNS = ["image_id", "origin_x", "origin_y", "side", "label", "entropy", "memd_mean", "split"]

ENTROPY_BIN_WIDTH = 0.05
MEMD_BIN_WIDTH = 1.0


def format_score(value: float) -> str:
    return f"{value:.6f}"


def patch_id(image_id: str, side: int, origin_x: int, origin_y: int) -> str:
    return f"{image_id}:{side}:{origin_x}:{origin_y}"


def write_json(path: Path, payload) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_json(path: Path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class StoreMeta:
    index_root: Path
    coverage_threshold: float
    sides: tuple[int, ...]
    tool_version: str


def write_store_meta(store_dir: Path, index_root: Path, coverage_threshold: float, sides) -> Path:
    return write_json(
        Path(store_dir) / STORE_META_NAME,
        {
            "index_root": str(Path(index_root).resolve()),
            "coverage_threshold": coverage_threshold,
            "sides": sorted(int(s) for s in sides),
            "tool_version": TOOL,
        },
    )


def read_store_meta(store_dir: Path) -> StoreMeta:
    payload = read_json(Path(store_dir) / STORE_META_NAME)
    return StoreMeta(
        index_root=Path(payload["index_root"]),
        coverage_threshold=float(payload["coverage_threshold"]),
        sides=tuple(int(s) for s in payload["sides"]),
        tool_version=str(payload["tool_version"]),
    )


def patches_path(store_dir: Path, side: int) -> Path:
    return Path(store_dir) / f"patches_{side}.csv"


def write_patches(store_dir: Path, side: int, per_image: dict[str, list[tuple[int, int]]]) -> Path:
    """Write one side's patch coordinates, grouped by image id, row-major."""
    path = patches_path(store_dir, side)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_id", "origin_x", "origin_y"])
        for image_id in sorted(per_image):
            for x, y in per_image[image_id]:
                writer.writerow([image_id, x, y])
    return path


def read_patches(store_dir: Path, side: int) -> dict[str, list[tuple[int, int]]]:
    path = patches_path(store_dir, side)
    per_image: dict[str, list[tuple[int, int]]] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)  # header
        for image_id, x, y in reader:
            per_image.setdefault(image_id, []).append((int(x), int(y)))
    return per_image


def scores_path(store_dir: Path, criterion: str, side: int) -> Path:
    return Path(store_dir) / f"scores_{criterion}_{side}.csv"


def write_scores(
    store_dir: Path,
    criterion: str,
    side: int,
    per_image: dict[str, list[tuple[int, int, int, float]]],
) -> Path:
    """Write per-patch scores as rows of (patch_index, origin, score)."""
    path = scores_path(store_dir, criterion, side)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_id", "patch_index", "origin_x", "origin_y", "score"])
        for image_id in sorted(per_image):
            for index, x, y, score in per_image[image_id]:
                writer.writerow([image_id, index, x, y, format_score(score)])
    return path


def read_scores(store_dir: Path, criterion: str, side: int) -> dict[str, list[tuple[int, int, int, float]]]:
    path = scores_path(store_dir, criterion, side)
    per_image: dict[str, list[tuple[int, int, int, float]]] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for image_id, index, x, y, score in reader:
            per_image.setdefault(image_id, []).append((int(index), int(x), int(y), float(score)))
    return per_image


def histogram_path(store_dir: Path, criterion: str, side: int) -> Path:
    return Path(store_dir) / f"hist_{criterion}_{side}.json"


def histogram_edges(criterion: str) -> list[float]:
    if criterion == "entropy":
        return [round(i * ENTROPY_BIN_WIDTH, 2) for i in range(161)]
    return [float(i) for i in range(256)]


def write_histogram(store_dir: Path, criterion: str, side: int, scores: list[float]) -> Path:
    """Fixed-bin score distribution: width 0.05 on [0, 8] for entropy, width 1 on [0, 255] for MEMD."""
    edges = histogram_edges(criterion)
    counts, _ = np.histogram(np.asarray(scores, dtype=np.float64), bins=np.asarray(edges))
    return write_json(
        histogram_path(store_dir, criterion, side),
        {
            "criterion": criterion,
            "side": side,
            "bin_width": ENTROPY_BIN_WIDTH if criterion == "entropy" else MEMD_BIN_WIDTH,
            "bin_edges": edges,
            "counts": [int(c) for c in counts],
            "total": len(scores),
        },
    )


def manifest_path(store_dir: Path, criterion: str, band: str, quantile: float, side: int) -> Path:
    percent = f"{quantile * 100:g}"
    return Path(store_dir) / f"manifest_{criterion}_{band}_q{percent}_{side}.csv"


@dataclass(frozen=True)
class ManifestHeader:
    criterion: str
    band: str
    quantile: float
    side: int
    seed: int
    tool_version: str = TOOL


def write_manifest(path: Path, header: ManifestHeader, records: list[PatchRecord]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(
            f"# criterion={header.criterion} band={header.band}"
            f" quantile={header.quantile:.6f} side={header.side}"
            f" seed={header.seed} tool={header.tool_version}\n"
        )
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_COLUMNS)
        for record in records:
            writer.writerow(
                [
                    record.image_id,
                    record.origin_x,
                    record.origin_y,
                    record.side,
                    record.label,
                    format_score(record.entropy) if record.entropy is not None else "",
                    format_score(record.memd_mean) if record.memd_mean is not None else "",
                    record.split or "",
                ]
            )
    return path


def read_manifest(path: Path) -> tuple[ManifestHeader, list[PatchRecord]]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        first = fh.readline().strip()
        if not first.startswith("# "):
            raise MalformedRow(f"{path}:1: missing manifest header line")
        fields = dict(part.split("=", 1) for part in first[2:].split(" ", 5))
        try:
            header = ManifestHeader(
                criterion=fields["criterion"],
                band=fields["band"],
                quantile=float(fields["quantile"]),
                side=int(fields["side"]),
                seed=int(fields["seed"]),
                tool_version=fields["tool"],
            )
        except (KeyError, ValueError) as exc:
            raise MalformedRow(f"{path}:1: bad manifest header: {exc}") from exc
        reader = csv.reader(fh)
        columns = next(reader, None)
        if columns != MANIFEST_COLUMNS:
            raise MalformedRow(f"{path}:2: expected columns {','.join(MANIFEST_COLUMNS)}")
        records = []
        for line_no, row in enumerate(reader, start=3):
            if not row:
                continue
            if len(row) != len(MANIFEST_COLUMNS):
                raise MalformedRow(f"{path}:{line_no}: expected {len(MANIFEST_COLUMNS)} fields")
            image_id, x, y, side, label, entropy_s, memd_s, split = row
            try:
                records.append(
                    PatchRecord(
                        image_id=image_id,
                        origin_x=int(x),
                        origin_y=int(y),
                        side=int(side),
                        label=int(label),
                        entropy=float(entropy_s) if entropy_s else None,
                        memd_mean=float(memd_s) if memd_s else None,
                        split=split or None,
                    )
                )
            except ValueError as exc:
                raise MalformedRow(f"{path}:{line_no}: {exc}") from exc
    return header, records


def read_predictions(path: Path) -> dict[str, int]:
    """Read a ``patch_id,prediction`` CSV with binary predictions."""
    path = Path(path)
    predictions: dict[str, int] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["patch_id", "prediction"]:
            raise MalformedRow(f"{path}:1: expected header patch_id,prediction")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise MalformedRow(f"{path}:{line_no}: expected 2 fields")
            pid, value = row
            if value not in ("0", "1"):
                raise MalformedRow(f"{path}:{line_no}: prediction must be 0 or 1, got {value!r}")
            if pid in predictions:
                raise MalformedRow(f"{path}:{line_no}: duplicate prediction for {pid}")
            predictions[pid] = int(value)
    return predictions


def write_verdicts(path: Path, rows: list[tuple[str, int, int, float]]) -> Path:
    """Write per-image verdicts as ``image_id,label,verdict,mean_score`` rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_id", "label", "verdict", "mean_score"])
        for image_id, label, verdict, mean_score in rows:
            writer.writerow([image_id, label, verdict, format_score(mean_score)])
    return path
