"""Fixture corpora for the trainer, written purely through the file formats."""
from __future__ import annotations

import csv
import subprocess
import sys
from pathlib import Path

import numpy as np
from PIL import Image

MANIFEST_COLUMNS = ["image_id", "origin_x", "origin_y", "side", "label", "entropy", "memd_mean", "split"]


def save_png(path: Path, array: np.ndarray):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(array).save(path)


def write_index_csv(root: Path, rows: list[tuple[str, str, str, str]]):
    with (root / "index.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_id", "image_path", "mask_path", "label"])
        writer.writerows(rows)


def write_manifest_csv(path: Path, rows, side=32, criterion="entropy", band="high", quantile=0.15):
    """rows: (image_id, x, y, label, split)."""
    lines = [
        f"# criterion={criterion} band={band} quantile={quantile:.6f}"
        f" side={side} seed=0 tool=patchscore 0.1.0",
        ",".join(MANIFEST_COLUMNS),
    ]
    for image_id, x, y, label, split in rows:
        lines.append(f"{image_id},{x},{y},{side},{label},1.500000,,{split}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def noise_image(rng, low, high, size=96):
    return rng.integers(low, high, size=(size, size, 3), dtype=np.uint8)


def separable_corpus(root: Path, n_images=20, seed=3) -> Path:
    """Benign images are dark noise, malignant ones bright noise; full masks."""
    rng = np.random.default_rng(seed)
    root.mkdir(parents=True, exist_ok=True)
    rows = []
    full_mask = np.full((96, 96), 255, dtype=np.uint8)
    for i in range(n_images):
        image_id = f"img{i:03d}"
        malignant = i % 2 == 0
        pixels = noise_image(rng, 150, 230) if malignant else noise_image(rng, 20, 100)
        save_png(root / "images" / f"{image_id}.png", pixels)
        save_png(root / "masks" / f"{image_id}.png", full_mask)
        rows.append(
            (image_id, f"images/{image_id}.png", f"masks/{image_id}.png",
             "malignant" if malignant else "benign")
        )
    write_index_csv(root, rows)
    return root


def patchscore_cli(*args) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "patchscore.cli", *map(str, args)],
        capture_output=True,
        text=True,
    )
