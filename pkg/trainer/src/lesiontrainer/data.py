"""Readers for the upstream pipeline's file formats and the patch dataset.

The trainer talks to the preprocessing tool purely through its files: the
dataset index CSV (``image_id,image_path,mask_path,label``), the manifest CSV
(one ``# key=value`` header line, then
``image_id,origin_x,origin_y,side,label,entropy,memd_mean,split`` rows) and
the predictions CSV it writes back (``patch_id,prediction``). Patch pixels are
re-cropped from the source images using the manifest coordinates; nothing is
duplicated on disk.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch.utils.data import Dataset


class EmptySplit(ValueError):
    """A required train/val/test split has no patches."""


class UnresolvablePatch(ValueError):
    """A manifest patch cannot be cropped from its source image."""


@dataclass(frozen=True)
class ManifestRow:
    image_id: str
    origin_x: int
    origin_y: int
    side: int
    label: int
    split: str

    @property
    def patch_id(self) -> str:
        return f"{self.image_id}:{self.side}:{self.origin_x}:{self.origin_y}"


def read_manifest(path: str | Path) -> tuple[dict, list[ManifestRow]]:
    """Parse a manifest CSV into its header fields and patch rows."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        first = fh.readline().strip()
        if not first.startswith("# "):
            raise ValueError(f"{path}: missing manifest header line")
        header = dict(part.split("=", 1) for part in first[2:].split(" ", 5))
        reader = csv.DictReader(fh)
        rows = []
        for record in reader:
            rows.append(
                ManifestRow(
                    image_id=record["image_id"],
                    origin_x=int(record["origin_x"]),
                    origin_y=int(record["origin_y"]),
                    side=int(record["side"]),
                    label=int(record["label"]),
                    split=record["split"],
                )
            )
    return header, rows


def read_index(root: str | Path) -> dict[str, Path]:
    """Map image ids to image paths from a dataset root's index.csv."""
    root = Path(root)
    index_path = root / "index.csv" if root.is_dir() else root
    base = index_path.parent
    paths = {}
    with index_path.open(newline="", encoding="utf-8") as fh:
        for record in csv.DictReader(fh):
            paths[record["image_id"]] = base / record["image_path"]
    return paths


class PatchDataset(Dataset):
    """Crops manifest patches lazily from their source images.

    Pixels are scaled to [0, 1]; tensors are float32 CHW with 3 channels
    (grayscale sources are replicated). Images are cached in memory, which is
    fine at desk scale.
    """

    def __init__(self, rows: list[ManifestRow], image_paths: dict[str, Path]):
        self.rows = rows
        self.image_paths = image_paths
        self._cache: dict[str, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def _image(self, image_id: str) -> np.ndarray:
        if image_id not in self._cache:
            path = self.image_paths.get(image_id)
            if path is None or not path.is_file():
                raise UnresolvablePatch(f"no image file for id {image_id!r}")
            with Image.open(path) as im:
                self._cache[image_id] = np.asarray(im.convert("RGB"))
        return self._cache[image_id]

    def __getitem__(self, index: int):
        row = self.rows[index]
        pixels = self._image(row.image_id)
        h, w = pixels.shape[:2]
        if row.origin_x + row.side > w or row.origin_y + row.side > h:
            raise UnresolvablePatch(f"{row.patch_id} exceeds {w}x{h} source image")
        patch = pixels[row.origin_y : row.origin_y + row.side, row.origin_x : row.origin_x + row.side]
        tensor = torch.from_numpy(patch.astype(np.float32) / 255.0).permute(2, 0, 1)
        return tensor, torch.tensor(float(row.label))


def split_rows(rows: list[ManifestRow]) -> dict[str, list[ManifestRow]]:
    """Group manifest rows by split; every split must be non-empty."""
    groups = {"train": [], "val": [], "test": []}
    for row in rows:
        if row.split in groups:
            groups[row.split].append(row)
    for name, group in groups.items():
        if not group:
            raise EmptySplit(f"manifest has no {name} patches")
    return groups


def write_predictions(path: str | Path, predictions: dict[str, int]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["patch_id", "prediction"])
        for patch_id in sorted(predictions):
            writer.writerow([patch_id, predictions[patch_id]])
    return path
