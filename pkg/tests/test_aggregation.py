"""Patch-vote aggregation."""
import pytest

from patchscore.aggregation import PatchPredictions, aggregate
from patchscore.errors import EmptyPredictions


def verdict_of(preds):
    return aggregate(PatchPredictions("img", tuple(preds)))


class TestAggregate:
    def test_unanimous_benign(self):
        result = verdict_of([0, 0, 0])
        assert (result.verdict, result.mean_score) == (0, 0.0)

    def test_majority_malignant(self):
        result = verdict_of([1, 0, 1, 1])
        assert (result.verdict, result.mean_score) == (1, 0.75)

    def test_boundary_goes_malignant(self):
        result = verdict_of([0, 1])
        assert (result.verdict, result.mean_score) == (1, 0.5)

    def test_truth_table_small(self):
        cases = {
            (0,): 0,
            (1,): 1,
            (0, 0): 0,
            (0, 1): 1,
            (1, 1): 1,
            (0, 0, 1): 0,
            (0, 1, 1): 1,
            (0, 0, 1, 1): 1,
            (0, 0, 0, 1): 0,
        }
        for preds, expected in cases.items():
            assert verdict_of(preds).verdict == expected

    def test_permutation_invariant(self):
        import itertools

        preds = [0, 1, 1, 0, 1]
        verdicts = {verdict_of(p).verdict for p in itertools.permutations(preds)}
        assert len(verdicts) == 1

    def test_replication_invariant(self):
        preds = [0, 1, 0]
        assert verdict_of(preds).verdict == verdict_of(preds * 3).verdict

    def test_monotone_under_upward_flips(self):
        preds = [0, 0, 1, 0, 1, 0, 0]
        base = verdict_of(preds).verdict
        for i, p in enumerate(preds):
            if p == 0:
                flipped = list(preds)
                flipped[i] = 1
                assert verdict_of(flipped).verdict >= base

    def test_empty_predictions_rejected(self):
        with pytest.raises(EmptyPredictions):
            PatchPredictions("img", ())

    def test_non_binary_rejected(self):
        with pytest.raises(ValueError):
            PatchPredictions("img", (0, 2))
