"""Patch-vote aggregation: per-patch binary predictions to one image verdict."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyPredictions


@dataclass(frozen=True)
class PatchPredictions:
    """Binary classifier outputs for every scored patch of one image."""

    image_id: str
    preds: tuple[int, ...]

    def __post_init__(self):
        if not self.preds:
            raise EmptyPredictions(f"no predictions for image {self.image_id}")
        if any(p not in (0, 1) for p in self.preds):
            raise ValueError(f"predictions for {self.image_id} must all be 0 or 1")


@dataclass(frozen=True)
class AggregateVerdict:
    image_id: str
    verdict: int
    mean_score: float


def aggregate(predictions: PatchPredictions) -> AggregateVerdict:
    """Majority vote over patch predictions.

    The verdict is malignant (1) when the mean prediction is >= 0.5, benign
    (0) otherwise; an exact 0.5 tie goes to malignant. The comparison is done
    as 2 * sum >= count in integers, so the boundary never depends on float
    rounding.
    """
    votes = sum(predictions.preds)
    count = len(predictions.preds)
    verdict = 1 if 2 * votes >= count else 0
    return AggregateVerdict(
        image_id=predictions.image_id,
        verdict=verdict,
        mean_score=votes / count,
    )
