"""Shannon entropy of a grayscale patch over its 256-bin intensity histogram."""
from __future__ import annotations

import numpy as np

N_BINS = 256
MAX_ENTROPY_BITS = 8.0


def histogram(patch: np.ndarray) -> np.ndarray:
    """Count pixels per intensity; returns a (256,) int64 array."""
    patch = np.asarray(patch)
    if patch.size == 0:
        raise ValueError("cannot histogram an empty patch")
    flat = patch.reshape(-1)
    if flat.min() < 0 or flat.max() > 255:
        raise ValueError("intensities must lie in [0, 255]")
    return np.bincount(flat.astype(np.int64), minlength=N_BINS)


def shannon_entropy(counts: np.ndarray) -> float:
    """Entropy in bits of the distribution described by ``counts``.

    H = -sum_k p_k log2(p_k) with p_k = counts[k] / total; empty bins
    contribute nothing (0 log 0 = 0). Summation runs in ascending bin order.
    Ranges from 0 (constant patch) to 8 (uniform over all 256 intensities).
    """
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    if total < 1:
        raise ValueError("histogram total must be >= 1")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())
