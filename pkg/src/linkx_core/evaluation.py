"""Data splits and evaluation metrics."""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.stats import rankdata

from linkx_core.errors import ShapeError, UndefinedMetricError
from linkx_core.rng import Stream, make_rng

logger = logging.getLogger(__name__)

MetricName = Literal["accuracy", "rocauc"]


@dataclass(frozen=True, eq=False)
class Split:
    """Disjoint train/val/test node sets (each sorted ascending)."""

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    seed: int
    index: int

    def partial_labels(self, labels: np.ndarray) -> np.ndarray:
        """Labels visible at training time: train nodes keep theirs, others get -1."""
        partial = np.full(labels.shape, -1, dtype=np.int64)
        partial[self.train] = labels[self.train]
        return partial


def make_splits(
    n: int,
    seed: int,
    count: int = 5,
    train_fraction: float = 0.5,
    val_fraction: float = 0.25,
) -> list[Split]:
    """Seeded random train/val/test splits (50/25/25 by default).

    Split i shuffles nodes with its own stream and cuts the permutation into
    contiguous parts of floor(train * n) and floor(val * n) nodes; the rest
    is test.
    """
    if n < 4:
        raise ValueError(f"Need at least 4 nodes to split, got {n}")
    n_train = int(np.floor(train_fraction * n))
    n_val = int(np.floor(val_fraction * n))
    splits = []
    for i in range(count):
        perm = make_rng(seed, Stream.SPLIT, i).permutation(n)
        splits.append(
            Split(
                train=np.sort(perm[:n_train]),
                val=np.sort(perm[n_train : n_train + n_val]),
                test=np.sort(perm[n_train + n_val :]),
                seed=seed,
                index=i,
            )
        )
    return splits


def _select(values: np.ndarray, mask: np.ndarray | None) -> np.ndarray:
    if mask is None:
        return values
    mask = np.asarray(mask)
    return values[mask] if mask.dtype == bool else values[mask.astype(np.int64)]


def accuracy(preds: np.ndarray, labels: np.ndarray, mask: np.ndarray | None = None) -> float:
    """Fraction of correct predictions over the masked nodes."""
    p, y = _select(np.asarray(preds), mask), _select(np.asarray(labels), mask)
    if p.size == 0:
        raise UndefinedMetricError("Accuracy over an empty node set is undefined")
    if p.shape != y.shape:
        raise ShapeError(f"Predictions {p.shape} and labels {y.shape} differ in shape")
    return float(np.count_nonzero(p == y)) / p.size


def roc_auc(scores: np.ndarray, labels: np.ndarray, mask: np.ndarray | None = None) -> float:
    """Area under the ROC curve as the normalized Mann-Whitney U statistic.

    Tied scores count half through average ranks.

    Raises:
        UndefinedMetricError: If the masked labels are not binary with both classes present
    """
    s = _select(np.asarray(scores, dtype=np.float64), mask)
    y = _select(np.asarray(labels), mask)
    if s.size == 0:
        raise UndefinedMetricError("ROC-AUC over an empty node set is undefined")
    if not np.isin(y, (0, 1)).all():
        raise UndefinedMetricError("ROC-AUC requires binary labels")
    n_pos = int(np.count_nonzero(y == 1))
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("ROC-AUC is undefined when only one class is present")

    ranks = rankdata(s)
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def score_nodes(metric: MetricName, probs: np.ndarray, labels: np.ndarray, nodes: np.ndarray) -> float:
    """Evaluate C x n class probabilities on a node set."""
    if metric == "accuracy":
        return accuracy(np.argmax(probs, axis=0), labels, nodes)
    if metric == "rocauc":
        if probs.shape[0] != 2:
            raise UndefinedMetricError(f"ROC-AUC needs two classes, got {probs.shape[0]}")
        return roc_auc(probs[1], labels, nodes)
    raise ValueError(f"Unknown metric '{metric}'")
