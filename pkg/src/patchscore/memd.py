"""Mean exhaustive minimum distance (MEMD) between 8-bit images.

The criterion matches every pixel of the smaller image with a distinct pixel
of the larger one and averages the absolute intensity differences, so a score
of 0 means identical pixel multisets and 255 means a white image against a
black one. Two routes are provided:

* :func:`memd_exhaustive` works directly on pixel arrays and serves as the
  reference oracle.
* :func:`memd_sorted` works on 256-bin pixel counts (a counting sort of the
  image) and is the production fast path; it returns exactly the same value.

For equal-size inputs both routes use sorted first-to-first matching, which
is the optimal one-dimensional assignment. For unequal sizes both walk the
smaller image's pixels in ascending intensity order and match each one to the
nearest unconsumed pixel of the larger image, ties going to the smaller
intensity.

Scores within one image are compared pairwise and averaged per patch; that
pass is O(m^2) in the patch count m but each pair costs O(256) thanks to the
counting-sort representation.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import EmptyImage, MixedPatchSizes

N_BINS = 256


@dataclass
class MemdInstrumentation:
    """Accumulates pair-evaluation counts and wall time for benchmarking."""

    pair_evaluations: int = 0
    seconds: float = 0.0

    def record(self, pairs: int, seconds: float):
        self.pair_evaluations += pairs
        self.seconds += seconds


@dataclass(frozen=True)
class PatchMemdSummary:
    """Average MEMD of one patch against all sibling patches of its image."""

    patch_index: int
    memd_mean: float


def pixel_multiset(img: np.ndarray) -> np.ndarray:
    """256-bin pixel count of a grayscale image (its sorted pixel multiset)."""
    img = np.asarray(img)
    if img.size == 0:
        raise EmptyImage("cannot build a pixel multiset from an empty image")
    flat = img.reshape(-1).astype(np.int64)
    if flat.min() < 0 or flat.max() > 255:
        raise ValueError("intensities must lie in [0, 255]")
    return np.bincount(flat, minlength=N_BINS)


def memd_exhaustive(a: np.ndarray, b: np.ndarray) -> float:
    """Reference MEMD between two grayscale images, scanning raw pixels.

    O(#a * #b) for unequal sizes; intended for verification, not production.
    """
    small, large = _flat_pair(a, b)
    if small.size == large.size:
        total = int(np.abs(np.sort(small) - np.sort(large)).sum())
    else:
        values = np.sort(large)
        consumed = np.zeros(values.size, dtype=bool)
        total = 0
        for v in np.sort(small):
            dist = np.abs(values - v)
            dist[consumed] = 1000  # beyond any real distance
            # values ascend, so the first minimum is the smaller intensity
            idx = int(np.argmin(dist))
            consumed[idx] = True
            total += int(dist[idx])
    return total / small.size


def memd_sorted(a_counts: np.ndarray, b_counts: np.ndarray) -> float:
    """MEMD from two 256-bin pixel counts; exact fast path.

    Equal sizes reduce to the L1 distance between cumulative counts (the
    sorted first-to-first matching); unequal sizes run the same ascending
    greedy as :func:`memd_exhaustive` on the count bins.
    """
    a_counts = _checked_counts(a_counts)
    b_counts = _checked_counts(b_counts)
    na, nb = int(a_counts.sum()), int(b_counts.sum())
    if na == nb:
        total = int(np.abs(np.cumsum(a_counts) - np.cumsum(b_counts)).sum())
        return total / na
    small, large = (a_counts, b_counts) if na < nb else (b_counts, a_counts)
    avail = large.copy()
    total = 0
    for v in np.nonzero(small)[0]:
        for _ in range(int(small[v])):
            nonzero = np.nonzero(avail)[0]
            dist = np.abs(nonzero - int(v))
            idx = int(np.argmin(dist))  # first minimum -> smaller intensity
            avail[nonzero[idx]] -= 1
            total += int(dist[idx])
    return total / min(na, nb)


def memd_multichannel_naive(a: np.ndarray, b: np.ndarray) -> float:
    """Greedy MEMD on multichannel pixels under the max norm.

    Pixels of the smaller image are processed in ascending max-norm order and
    matched to the unconsumed pixel of the other image with minimal channelwise
    max distance (ties to the first candidate in the larger image's own
    norm-sorted order). Kept to demonstrate why sorting by a single-pixel norm
    breaks down with multiple channels; production scoring is grayscale.
    """
    small, large = _flat_pair(a, b, channels=True)
    small = small[np.lexsort((small[:, 2], small[:, 1], small[:, 0], small.max(axis=1)))]
    large = large[np.lexsort((large[:, 2], large[:, 1], large[:, 0], large.max(axis=1)))]
    consumed = np.zeros(large.shape[0], dtype=bool)
    total = 0
    for pixel in small:
        dist = np.abs(large - pixel).max(axis=1)
        dist[consumed] = 1000
        idx = int(np.argmin(dist))
        consumed[idx] = True
        total += int(dist[idx])
    return total / small.shape[0]


def per_patch_memd(
    patches: list[np.ndarray],
    instrumentation: MemdInstrumentation | None = None,
) -> list[float]:
    """Average MEMD of each patch against all other patches of the same image.

    All patches must share one side length, so every pair is an equal-size
    comparison: each of the m(m-1)/2 unordered pairs is scored once on the
    cumulative 256-bin counts and reused for both endpoints. An image with a
    single patch scores 0. Integer totals are accumulated exactly and divided
    once, so results do not depend on evaluation order.
    """
    if not patches:
        return []
    shapes = {np.asarray(p).shape for p in patches}
    if len(shapes) > 1:
        raise MixedPatchSizes(f"patches have differing shapes: {sorted(shapes)}")
    m = len(patches)
    started = time.perf_counter()
    if m == 1:
        pixel_multiset(patches[0])  # still rejects empty input
        means = [0.0]
    else:
        cum = np.cumsum(np.stack([pixel_multiset(p) for p in patches]), axis=1)
        totals = np.zeros(m, dtype=np.int64)
        for i in range(m - 1):
            pair_totals = np.abs(cum[i + 1 :] - cum[i]).sum(axis=1)
            totals[i] += int(pair_totals.sum())
            totals[i + 1 :] += pair_totals
        pixels = int(np.asarray(patches[0]).size)
        means = (totals / ((m - 1) * pixels)).tolist()
    if instrumentation is not None:
        instrumentation.record(m * (m - 1) // 2, time.perf_counter() - started)
    return means


def summarize_patches(
    patches: list[np.ndarray],
    instrumentation: MemdInstrumentation | None = None,
) -> list[PatchMemdSummary]:
    """Same as :func:`per_patch_memd` but wrapped with explicit patch indices."""
    means = per_patch_memd(patches, instrumentation)
    return [PatchMemdSummary(i, mean) for i, mean in enumerate(means)]


def _flat_pair(a, b, channels: bool = False):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size == 0 or b.size == 0:
        raise EmptyImage("MEMD inputs must be non-empty")
    if channels:
        if a.ndim < 2 or a.shape[-1] != b.shape[-1]:
            raise ValueError("multichannel inputs need matching channel counts")
        a = a.reshape(-1, a.shape[-1]).astype(np.int64)
        b = b.reshape(-1, b.shape[-1]).astype(np.int64)
        if a.shape[0] > b.shape[0]:
            a, b = b, a
        return a, b
    a = a.reshape(-1).astype(np.int64)
    b = b.reshape(-1).astype(np.int64)
    if a.size > b.size:
        a, b = b, a
    return a, b


def _checked_counts(counts: np.ndarray) -> np.ndarray:
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape != (N_BINS,):
        raise ValueError(f"expected shape ({N_BINS},) counts, got {counts.shape}")
    if (counts < 0).any():
        raise ValueError("counts must be non-negative")
    if counts.sum() < 1:
        raise EmptyImage("pixel multiset is empty")
    return counts
