"""Confusion-matrix accounting and the F1 family of metrics.

Every metric here is a pure function of integer counts; division happens
last.  Where a ratio is 0/0 (nothing predicted and nothing to find) the
value is ``empty_score``, 1.0 by default, so an exact all-negative match is
scored as perfect.  Pass ``empty_score=0.0`` to get the other common
convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ShapeError, UndefinedMetricError

EMPTY_SCORE = 1.0


@dataclass(frozen=True)
class ConfusionCounts:
    """Counts of true/false positives and negatives.

    The fields are integers when produced from label matrices, and
    fractions summing to one when produced by
    :func:`f1opt.theory.confusion_fractions`.
    """

    tp: float = 0
    fp: float = 0
    fn: float = 0
    tn: float = 0

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn

    @property
    def positives(self):
        """Number of actual positives, ``tp + fn``."""
        return self.tp + self.fn

    @property
    def predicted_positives(self):
        return self.tp + self.fp

    def __add__(self, other: ConfusionCounts) -> ConfusionCounts:
        return ConfusionCounts(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn
        )


def as_label_matrix(x, name: str = "labels") -> np.ndarray:
    """Validate a binary matrix and return it as a 2-D ``int8`` array.

    A 1-D input is read as a single label column (n instances, m = 1).
    """
    arr = np.asarray(x)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{name} must be a non-empty n x m matrix, got shape {arr.shape}")
    if arr.dtype == bool:
        return arr.astype(np.int8)
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError(f"{name} must contain only 0 and 1")
    return arr.astype(np.int8)


def as_score_matrix(x, calibrated: bool = False, name: str = "scores") -> np.ndarray:
    """Validate a real-valued score matrix; 1-D input becomes one column.

    With ``calibrated=True`` every entry must be a probability in [0, 1].
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{name} must be a non-empty n x m matrix, got shape {arr.shape}")
    if np.isnan(arr).any():
        raise ValueError(f"{name} contains NaN")
    if calibrated and ((arr < 0).any() or (arr > 1).any()):
        raise ValueError(f"{name} flagged calibrated but has entries outside [0, 1]")
    return arr


def _aligned(pred, gold):
    p = as_label_matrix(pred, "pred")
    g = as_label_matrix(gold, "gold")
    if p.shape != g.shape:
        raise ShapeError(f"pred shape {p.shape} does not match gold shape {g.shape}")
    return p.astype(bool), g.astype(bool)


def confusion(pred, gold) -> ConfusionCounts:
    """Pool the confusion counts over every (instance, label) cell."""
    p, g = _aligned(pred, gold)
    return ConfusionCounts(
        tp=int(np.count_nonzero(p & g)),
        fp=int(np.count_nonzero(p & ~g)),
        fn=int(np.count_nonzero(~p & g)),
        tn=int(np.count_nonzero(~p & ~g)),
    )


def per_label_confusion(pred, gold) -> list[ConfusionCounts]:
    """Confusion counts for each column."""
    p, g = _aligned(pred, gold)
    tp, fp, fn, tn = _axis_counts(p, g, axis=0)
    return [ConfusionCounts(*map(int, row)) for row in zip(tp, fp, fn, tn)]


def _axis_counts(p, g, axis):
    tp = np.count_nonzero(p & g, axis=axis)
    fp = np.count_nonzero(p & ~g, axis=axis)
    fn = np.count_nonzero(~p & g, axis=axis)
    tn = np.count_nonzero(~p & ~g, axis=axis)
    return tp, fp, fn, tn


def _ratio(num, den, empty_score):
    return float(num) / float(den) if den else float(empty_score)


def f1_from_counts(c: ConfusionCounts, empty_score: float = EMPTY_SCORE) -> float:
    """F1 as ``2tp / (2tp + fp + fn)``."""
    return _ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, empty_score)


def precision(c: ConfusionCounts, empty_score: float = EMPTY_SCORE) -> float:
    return _ratio(c.tp, c.tp + c.fp, empty_score)


def recall(c: ConfusionCounts, empty_score: float = EMPTY_SCORE) -> float:
    return _ratio(c.tp, c.tp + c.fn, empty_score)


def accuracy(c: ConfusionCounts) -> float:
    """Fraction of cells predicted correctly.

    Raises
    ------
    UndefinedMetricError
        If the counts are all zero.
    """
    if c.total == 0:
        raise UndefinedMetricError("accuracy is undefined on an empty confusion matrix")
    return float(c.tp + c.tn) / float(c.total)


def jaccard(c: ConfusionCounts, empty_score: float = EMPTY_SCORE) -> float:
    """Intersection over union, ``tp / (tp + fp + fn)``; equals F1 / (2 - F1)."""
    return _ratio(c.tp, c.tp + c.fp + c.fn, empty_score)


def _vector_f1(tp, fp, fn, empty_score):
    tp = np.asarray(tp, dtype=np.int64)
    den = 2 * tp + np.asarray(fp, dtype=np.int64) + np.asarray(fn, dtype=np.int64)
    out = np.full(den.shape, float(empty_score))
    nz = den > 0
    out[nz] = 2.0 * tp[nz] / den[nz]
    return out


def micro_f1(pred, gold, empty_score: float = EMPTY_SCORE) -> float:
    """F1 on counts pooled over all n*m cells."""
    return f1_from_counts(confusion(pred, gold), empty_score)


def per_label_f1(pred, gold, empty_score: float = EMPTY_SCORE) -> np.ndarray:
    p, g = _aligned(pred, gold)
    tp, fp, fn, _ = _axis_counts(p, g, axis=0)
    return _vector_f1(tp, fp, fn, empty_score)


def per_instance_f1(pred, gold, empty_score: float = EMPTY_SCORE) -> np.ndarray:
    p, g = _aligned(pred, gold)
    tp, fp, fn, _ = _axis_counts(p, g, axis=1)
    return _vector_f1(tp, fp, fn, empty_score)


def macro_f1(pred, gold, empty_score: float = EMPTY_SCORE) -> float:
    """Unweighted mean of the per-label (column) F1 scores."""
    return float(per_label_f1(pred, gold, empty_score).mean())


def instance_f1(pred, gold, empty_score: float = EMPTY_SCORE) -> float:
    """Unweighted mean of the per-instance (row) F1 scores."""
    return float(per_instance_f1(pred, gold, empty_score).mean())


def multilabel_accuracy(pred, gold) -> float:
    p, g = _aligned(pred, gold)
    return float(np.count_nonzero(p == g)) / p.size
