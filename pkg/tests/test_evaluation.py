"""Tests for linkx_core.evaluation module."""

import numpy as np
import pytest

from linkx_core.errors import UndefinedMetricError
from linkx_core.evaluation import accuracy, make_splits, roc_auc, score_nodes


class TestMakeSplits:
    """Tests for make_splits."""

    def test_sizes_n4(self):
        """n = 4 splits into 2/1/1."""
        split = make_splits(4, seed=0, count=1)[0]
        assert (split.train.size, split.val.size, split.test.size) == (2, 1, 1)

    def test_disjoint_and_covering(self):
        """Parts are disjoint and cover every node."""
        for split in make_splits(101, seed=3):
            union = np.concatenate([split.train, split.val, split.test])
            assert np.array_equal(np.sort(union), np.arange(101))
            assert (split.train.size, split.val.size) == (50, 25)

    def test_deterministic(self):
        """Same seed, same splits."""
        a, b = make_splits(50, seed=7), make_splits(50, seed=7)
        for x, y in zip(a, b):
            assert np.array_equal(x.train, y.train) and np.array_equal(x.test, y.test)

    def test_splits_differ(self):
        """Pairwise train-set Jaccard stays below 0.6."""
        splits = make_splits(1000, seed=0, count=5)
        for i in range(5):
            for j in range(i + 1, 5):
                a, b = set(splits[i].train), set(splits[j].train)
                assert len(a & b) / len(a | b) < 0.6

    def test_too_small(self):
        """n < 4 is rejected."""
        with pytest.raises(ValueError):
            make_splits(3, seed=0)

    def test_partial_labels(self):
        """Only training labels stay visible."""
        split = make_splits(8, seed=1, count=1)[0]
        labels = np.arange(8) % 2
        partial = split.partial_labels(labels)
        assert np.array_equal(partial[split.train], labels[split.train])
        assert (partial[split.val] == -1).all() and (partial[split.test] == -1).all()


class TestAccuracy:
    """Tests for accuracy."""

    def test_masked(self):
        """Fraction correct over the mask."""
        preds, labels = np.array([0, 1, 1, 0]), np.array([0, 1, 0, 0])
        assert accuracy(preds, labels) == 0.75
        assert accuracy(preds, labels, np.array([2, 3])) == 0.5
        assert accuracy(preds, labels, np.array([True, True, False, False])) == 1.0

    def test_empty_mask(self):
        """Empty masks are undefined."""
        with pytest.raises(UndefinedMetricError):
            accuracy(np.array([0]), np.array([0]), np.array([], dtype=np.int64))


class TestRocAuc:
    """Tests for roc_auc."""

    def test_separating(self):
        """Perfect separation gives 1."""
        assert roc_auc(np.array([0.1, 0.2, 0.8, 0.9]), np.array([0, 0, 1, 1])) == 1.0

    def test_all_ties(self):
        """Equal scores give 0.5."""
        assert roc_auc(np.full(6, 0.3), np.array([0, 1, 0, 1, 1, 0])) == 0.5

    def test_pair_count_example(self):
        """3 of 4 positive/negative pairs ordered correctly."""
        assert roc_auc(np.array([0.1, 0.4, 0.35, 0.8]), np.array([0, 0, 1, 1])) == 0.75

    def test_matches_pair_enumeration(self):
        """Equals the brute-force pairwise count with half-credit ties."""
        rng = np.random.default_rng(0)
        scores = rng.integers(0, 5, size=40).astype(float)
        labels = rng.integers(0, 2, size=40)
        pos, neg = scores[labels == 1], scores[labels == 0]
        brute = np.mean([(p > q) + 0.5 * (p == q) for p in pos for q in neg])
        assert roc_auc(scores, labels) == pytest.approx(brute, abs=1e-12)

    def test_single_class(self):
        """A one-class mask is undefined."""
        with pytest.raises(UndefinedMetricError, match="one class"):
            roc_auc(np.array([0.1, 0.9, 0.5]), np.array([1, 0, 1]), np.array([0, 2]))

    def test_non_binary(self):
        """Labels must be binary."""
        with pytest.raises(UndefinedMetricError):
            roc_auc(np.array([0.1, 0.9]), np.array([0, 2]))


class TestScoreNodes:
    """Tests for score_nodes."""

    def test_accuracy_from_probs(self):
        """Argmax of column probabilities."""
        probs = np.array([[0.9, 0.2, 0.6], [0.1, 0.8, 0.4]])
        assert score_nodes("accuracy", probs, np.array([0, 1, 1]), np.arange(3)) == pytest.approx(2 / 3)

    def test_rocauc_uses_positive_class(self):
        """ROC-AUC scores the class-1 probability."""
        probs = np.array([[0.9, 0.2, 0.6, 0.1], [0.1, 0.8, 0.4, 0.9]])
        assert score_nodes("rocauc", probs, np.array([0, 1, 0, 1]), np.arange(4)) == 1.0

    def test_rocauc_needs_two_classes(self):
        """Multi-class probabilities cannot be scored by ROC-AUC."""
        with pytest.raises(UndefinedMetricError):
            score_nodes("rocauc", np.full((3, 4), 1 / 3), np.array([0, 1, 2, 0]), np.arange(4))
