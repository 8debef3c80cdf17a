"""Synthetic image corpora written as real PNG datasets."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from PIL import Image


def save_png(path: Path, array: np.ndarray):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(array).save(path)


def make_corpus(
    root: Path,
    n_images: int = 20,
    size: int = 96,
    seed: int = 7,
    n_malignant: int | None = None,
    full_masks: bool = False,
) -> Path:
    """Write a synthetic lesion dataset: RGB images, masks and index.csv.

    Images are noise with a brighter elliptical 'lesion'; masks cover the
    ellipse. Labels alternate so roughly half the corpus is malignant unless
    ``n_malignant`` is given.
    """
    rng = np.random.default_rng(seed)
    root.mkdir(parents=True, exist_ok=True)
    (root / "images").mkdir(exist_ok=True)
    (root / "masks").mkdir(exist_ok=True)
    rows = []
    for i in range(n_images):
        image_id = f"img{i:03d}"
        pixels = rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8)
        yy, xx = np.mgrid[0:size, 0:size]
        cy, cx = size // 2 + int(rng.integers(-8, 9)), size // 2 + int(rng.integers(-8, 9))
        ry, rx = int(rng.integers(size // 4, size // 2 - 4)), int(rng.integers(size // 4, size // 2 - 4))
        lesion = ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0
        pixels[lesion] = (pixels[lesion] // 2) + 96
        if full_masks:
            mask = np.full((size, size), True)
        else:
            mask = lesion
        if n_malignant is None:
            label = "malignant" if i % 2 == 0 else "benign"
        else:
            label = "malignant" if i < n_malignant else "benign"
        save_png(root / "images" / f"{image_id}.png", pixels)
        save_png(root / "masks" / f"{image_id}.png", mask.astype(np.uint8) * 255)
        rows.append([image_id, f"images/{image_id}.png", f"masks/{image_id}.png", label])
    with (root / "index.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_id", "image_path", "mask_path", "label"])
        writer.writerows(rows)
    return root


def write_dataset(root: Path, items: list[tuple[str, np.ndarray, np.ndarray | None, str]]) -> Path:
    """Write an explicit dataset: (image_id, pixels, mask bits or None, label)."""
    root.mkdir(parents=True, exist_ok=True)
    rows = []
    for image_id, pixels, mask, label in items:
        save_png(root / "images" / f"{image_id}.png", pixels)
        mask_rel = ""
        if mask is not None:
            mask_rel = f"masks/{image_id}.png"
            save_png(root / mask_rel, mask.astype(np.uint8) * 255)
        rows.append([image_id, f"images/{image_id}.png", mask_rel, label])
    with (root / "index.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_id", "image_path", "mask_path", "label"])
        writer.writerows(rows)
    return root
