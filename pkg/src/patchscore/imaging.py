"""Raster primitives: grayscale conversion, ROI tiling and patch cropping.

Images are numpy arrays throughout: RGB rasters have shape (height, width, 3)
and grayscale rasters (height, width), both uint8. Masks are boolean arrays of
shape (height, width) where True marks a region-of-interest pixel.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import EmptyMask, OutOfBounds, UnsupportedImage

# Production patch side lengths. Library functions accept any positive side;
# PatchRecord and the CLI enforce this set.
PATCH_SIDES = (32, 64, 128, 256)

LABEL_BENIGN = 0
LABEL_MALIGNANT = 1

SPLITS = ("train", "val", "test")


@dataclass(frozen=True)
class PatchRecord:
    """One square patch cut from a source image.

    Scores and the split assignment are filled in as the pipeline progresses,
    hence optional.
    """

    image_id: str
    origin_x: int
    origin_y: int
    side: int
    label: int
    entropy: float | None = None
    memd_mean: float | None = None
    split: str | None = None

    def __post_init__(self):
        if self.side not in PATCH_SIDES:
            raise ValueError(f"side {self.side} not one of {PATCH_SIDES}")
        if self.origin_x < 0 or self.origin_y < 0:
            raise ValueError("patch origin must be non-negative")
        if self.label not in (LABEL_BENIGN, LABEL_MALIGNANT):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")
        if self.entropy is not None and not 0.0 <= self.entropy <= 8.0:
            raise ValueError(f"entropy {self.entropy} outside [0, 8]")
        if self.memd_mean is not None and not 0.0 <= self.memd_mean <= 255.0:
            raise ValueError(f"memd_mean {self.memd_mean} outside [0, 255]")
        if self.split is not None and self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {self.split!r}")

    @property
    def patch_id(self) -> str:
        return f"{self.image_id}:{self.side}:{self.origin_x}:{self.origin_y}"


def to_grayscale(rgb: np.ndarray) -> np.ndarray:
    """Convert an RGB raster to 8-bit grayscale.

    Uses the BT.601 luma weights 0.299/0.587/0.114 with rounding half away
    from zero. Computed in per-mille integer arithmetic so the result is
    bit-exact: gray = (299 R + 587 G + 114 B + 500) // 1000.
    """
    arr = np.asarray(rgb)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) RGB array, got shape {arr.shape}")
    channels = arr.astype(np.int64)
    luma = 299 * channels[..., 0] + 587 * channels[..., 1] + 114 * channels[..., 2]
    return ((luma + 500) // 1000).astype(np.uint8)


def tile_roi(mask: np.ndarray, side: int, coverage_threshold: float = 0.5) -> list[tuple[int, int]]:
    """Tile the mask's region of interest into non-overlapping square cells.

    The grid is anchored at the top-left corner of the bounding box of the set
    mask bits. A cell is kept when it lies fully inside the image and at least
    ``coverage_threshold`` of its pixels are masked. Origins are returned as
    (x, y) tuples in row-major order.

    Raises EmptyMask when no bit is set.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise ValueError(f"expected 2-d mask, got shape {mask.shape}")
    if side < 1:
        raise ValueError(f"side must be positive, got {side}")
    if not 0.0 < coverage_threshold <= 1.0:
        raise ValueError(f"coverage threshold must be in (0, 1], got {coverage_threshold}")
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        raise EmptyMask("mask has no set bit")
    height, width = mask.shape
    x0, y0 = int(xs.min()), int(ys.min())
    x1, y1 = int(xs.max()), int(ys.max())
    cell_area = side * side
    origins = []
    for y in range(y0, y1 + 1, side):
        if y + side > height:
            break
        for x in range(x0, x1 + 1, side):
            if x + side > width:
                break
            covered = int(mask[y : y + side, x : x + side].sum())
            if covered >= coverage_threshold * cell_area:
                origins.append((x, y))
    return origins


def crop(img: np.ndarray, origin: tuple[int, int], side: int) -> np.ndarray:
    """Copy the side x side sub-image whose top-left corner is ``origin`` (x, y)."""
    img = np.asarray(img)
    x, y = origin
    height, width = img.shape[:2]
    if x < 0 or y < 0 or x + side > width or y + side > height:
        raise OutOfBounds(
            f"patch ({x}, {y}) side {side} exceeds {width}x{height} image"
        )
    return img[y : y + side, x : x + side].copy()


def load_rgb(path: str | Path) -> np.ndarray:
    """Load a PNG as an (h, w, 3) uint8 RGB array."""
    with Image.open(path) as im:
        return np.asarray(_normalized(im, path).convert("RGB"))


def load_gray(path: str | Path) -> np.ndarray:
    """Load a PNG as an (h, w) uint8 grayscale array.

    Grayscale files are returned as stored; color files go through
    :func:`to_grayscale` so the conversion is the same everywhere.
    """
    with Image.open(path) as im:
        im = _normalized(im, path)
        if im.mode == "L":
            return np.asarray(im)
        return to_grayscale(np.asarray(im.convert("RGB")))


def load_mask(path: str | Path) -> np.ndarray:
    """Load a PNG mask; pixel values > 127 count as set."""
    with Image.open(path) as im:
        return np.asarray(im.convert("L")) > 127


def _normalized(im: Image.Image, path) -> Image.Image:
    if im.mode in ("L", "RGB"):
        return im
    if im.mode in ("1", "LA"):
        return im.convert("L")
    if im.mode in ("P", "RGBA"):
        return im.convert("RGB")
    raise UnsupportedImage(f"{path}: unsupported image mode {im.mode!r}")
