"""Quantile banding of patch scores, image splits and class balancing.

Quantiles are strictly per image: every patch is ranked against the other
patches of its own image, never against the whole corpus.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import DuplicateImageId, InsufficientBenign
from .imaging import LABEL_MALIGNANT

CRITERIA = ("entropy", "memd")
BANDS = ("low", "high")

SCORE_RANGES = {"entropy": (0.0, 8.0), "memd": (0.0, 255.0)}


@dataclass(frozen=True)
class ScoreTable:
    """Scores of one criterion for all patches of a single image."""

    image_id: str
    criterion: str
    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}")
        if not self.entries:
            raise ValueError(f"score table for {self.image_id} is empty")
        lo, hi = SCORE_RANGES[self.criterion]
        for index, score in self.entries:
            if not math.isfinite(score) or not lo <= score <= hi:
                raise ValueError(
                    f"{self.criterion} score {score} for patch {index} outside [{lo}, {hi}]"
                )

    @property
    def scores(self) -> np.ndarray:
        return np.array([score for _, score in self.entries], dtype=np.float64)


@dataclass(frozen=True)
class SelectionSpec:
    """Which band of which criterion to extract, at which quantile."""

    criterion: str
    band: str
    quantile: float = 0.15

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}")
        if self.band not in BANDS:
            raise ValueError(f"band must be one of {BANDS}")
        if not 0.0 < self.quantile < 0.5:
            raise ValueError(f"quantile must be in (0, 0.5), got {self.quantile}")


@dataclass(frozen=True)
class SplitAssignment:
    """Image-level train/val/test partition; patches inherit their image's split."""

    seed: int
    assignments: dict[str, str] = field(default_factory=dict)

    def split_of(self, image_id: str) -> str:
        return self.assignments[image_id]

    def ids_in(self, split: str) -> list[str]:
        return sorted(i for i, s in self.assignments.items() if s == split)


def select_band(table: ScoreTable, spec: SelectionSpec) -> list[int]:
    """Patch indices whose score falls in the requested quantile band.

    The threshold is the linear-interpolation quantile of the image's scores
    at q (low band) or 1 - q (high band); comparisons are inclusive, so the
    extreme patch always qualifies and a single-patch image is never emptied.
    Indices come back sorted ascending.
    """
    if table.criterion != spec.criterion:
        raise ValueError(
            f"table criterion {table.criterion!r} does not match spec {spec.criterion!r}"
        )
    scores = table.scores
    if spec.band == "low":
        threshold = float(np.quantile(scores, spec.quantile))
        keep = [index for (index, score) in table.entries if score <= threshold]
    else:
        threshold = float(np.quantile(scores, 1.0 - spec.quantile))
        keep = [index for (index, score) in table.entries if score >= threshold]
    return sorted(keep)


def assign_splits(image_ids: list[str], seed: int) -> SplitAssignment:
    """Deterministic seeded 90/10 split with 20% of the train side as validation.

    Sizes use round-half-up at each stage: test = round(0.1 n), then
    val = round(0.2 (n - test)); computed in integer arithmetic.
    """
    ids = list(image_ids)
    if len(set(ids)) != len(ids):
        seen, dupes = set(), set()
        for i in ids:
            (dupes if i in seen else seen).add(i)
        raise DuplicateImageId(f"duplicate image ids: {sorted(dupes)}")
    order = sorted(ids)
    random.Random(seed).shuffle(order)
    n = len(order)
    n_test = (n + 5) // 10
    remainder = n - n_test
    n_val = (2 * remainder + 5) // 10
    assignments = {}
    for position, image_id in enumerate(order):
        if position < n_test:
            assignments[image_id] = "test"
        elif position < n_test + n_val:
            assignments[image_id] = "val"
        else:
            assignments[image_id] = "train"
    return SplitAssignment(seed=seed, assignments=assignments)


def balance_classes(images: list[tuple[str, int, bool]], seed: int) -> list[str]:
    """All malignant images with a mask plus an equal-size seeded benign sample.

    ``images`` holds (image_id, label, has_mask) triples. Images without a
    mask are unusable (no region of interest) and are excluded from both
    pools. Raises InsufficientBenign when the benign pool is too small.
    """
    malignant = sorted(i for i, label, has_mask in images if has_mask and label == LABEL_MALIGNANT)
    benign = sorted(i for i, label, has_mask in images if has_mask and label != LABEL_MALIGNANT)
    if len(benign) < len(malignant):
        raise InsufficientBenign(
            f"need {len(malignant)} benign images with masks, only {len(benign)} available"
        )
    sampled = random.Random(seed).sample(benign, len(malignant))
    return sorted(malignant + sampled)
