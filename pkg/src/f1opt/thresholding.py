"""Choosing thresholds from labelled batches.

The prediction rule everywhere is ``score >= threshold``.  Candidate
thresholds are the distinct observed scores plus ``+inf``, which predicts
nothing.  When several candidates give the same F1 the largest wins.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import gfm
from .exceptions import ShapeError
from .metrics import (
    EMPTY_SCORE,
    as_label_matrix,
    as_score_matrix,
    f1_from_counts,
    ConfusionCounts,
    macro_f1,
    micro_f1,
)

MAX_PASSES = 20


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ThresholdSearchResult:
    """Chosen threshold with the sweep behind it.

    ``sweep`` has one row per candidate ``(threshold, f1)``, thresholds in
    decreasing order starting at ``+inf``.
    """

    threshold: float
    f1: float
    sweep: np.ndarray
    predicted_positives: int = 0


def _sweep(scores, labels, extra_tp=0, extra_fp=0, extra_fn=0, empty_score=EMPTY_SCORE):
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    y = np.asarray(labels).reshape(-1).astype(bool)
    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    y_sorted = y[order]
    # last index of every run of equal scores: predicting s >= that value
    ends = np.flatnonzero(np.append(s_sorted[1:] != s_sorted[:-1], True))
    cum_tp = np.cumsum(y_sorted)[ends]
    cum_pred = ends + 1
    positives = int(y.sum())

    tp = np.concatenate([[0], cum_tp]).astype(np.int64) + extra_tp
    fp = np.concatenate([[0], cum_pred - cum_tp]).astype(np.int64) + extra_fp
    fn = positives - np.concatenate([[0], cum_tp]).astype(np.int64) + extra_fn
    den = 2 * tp + fp + fn
    f1 = np.full(den.shape, float(empty_score))
    nz = den > 0
    f1[nz] = 2.0 * tp[nz] / den[nz]
    thresholds = np.concatenate([[np.inf], s_sorted[ends]])
    counts = np.concatenate([[0], cum_pred])
    return thresholds, f1, counts


def best_threshold(scores, labels, empty_score: float = EMPTY_SCORE) -> ThresholdSearchResult:
    """Threshold maximizing F1 of ``score >= threshold`` against ``labels``.

    Runs in O(n log n): one sort, then cumulative counts.

    >>> r = best_threshold([0.9, 0.8, 0.3], [1, 0, 1])
    >>> r.threshold, r.f1
    (0.3, 0.8)
    """
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    y = np.asarray(labels).reshape(-1)
    if s.size == 0:
        raise ValueError("best_threshold needs at least one example")
    if s.shape != y.shape:
        raise ShapeError(f"{s.size} scores but {y.size} labels")
    if np.isnan(s).any():
        raise ValueError("scores contain NaN")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    thresholds, f1, counts = _sweep(s, y, empty_score=empty_score)
    # first maximum in descending-threshold order is the largest threshold
    k = int(np.argmax(f1))
    return ThresholdSearchResult(
        float(thresholds[k]), float(f1[k]), np.column_stack([thresholds, f1]), int(counts[k])
    )


def predict(scores, thresholds) -> np.ndarray:
    """Apply per-label thresholds: ``P[i, j] = scores[i, j] >= thresholds[j]``."""
    s = as_score_matrix(scores)
    t = np.asarray(thresholds, dtype=np.float64).reshape(-1)
    if t.size != s.shape[1]:
        raise ShapeError(f"{t.size} thresholds for {s.shape[1]} labels")
    return (s >= t[None, :]).astype(np.int8)


@dataclass
class MultilabelThresholds:
    """Per-label thresholds tuned for one multilabel objective.

    ``history`` records the objective after initialisation and after every
    accepted coordinate update (micro tuning only).
    """

    per_label: np.ndarray
    objective: str
    achieved: float
    per_label_f1: np.ndarray | None = None
    converged: bool = True
    passes: int = 0
    history: list[float] = field(default_factory=list)


def _check(scores, gold):
    s = as_score_matrix(scores)
    g = as_label_matrix(gold, "gold")
    if s.shape != g.shape:
        raise ShapeError(f"scores shape {s.shape} does not match gold shape {g.shape}")
    return s, g


def tune_macro(scores, gold, empty_score: float = EMPTY_SCORE) -> MultilabelThresholds:
    """Independent best threshold per label; the result is the macro F1 achieved."""
    s, g = _check(scores, gold)
    results = [best_threshold(s[:, j], g[:, j], empty_score) for j in range(s.shape[1])]
    thresholds = np.array([r.threshold for r in results])
    per_f1 = np.array([r.f1 for r in results])
    achieved = macro_f1(predict(s, thresholds), g, empty_score)
    return MultilabelThresholds(thresholds, "macro", achieved, per_f1)


def tune_micro(scores, gold, empty_score: float = EMPTY_SCORE, max_passes: int = MAX_PASSES,
               init=None) -> MultilabelThresholds:
    """Coordinate ascent on pooled micro F1.

    Starts from the macro thresholds (or ``init``).  Labels are visited in
    index order; each is re-swept with the other labels' predictions held
    fixed, and its threshold moves only if pooled F1 strictly improves.
    Stops after a pass with no change, or after ``max_passes`` passes with
    ``converged=False`` and a :class:`ConvergenceWarning`.
    """
    s, g = _check(scores, gold)
    m = s.shape[1]
    thr = tune_macro(s, g, empty_score).per_label if init is None else np.array(init, dtype=float)
    P = predict(s, thr).astype(bool)
    G = g.astype(bool)
    tp = np.count_nonzero(P & G, axis=0).astype(np.int64)
    fp = np.count_nonzero(P & ~G, axis=0).astype(np.int64)
    fn = np.count_nonzero(~P & G, axis=0).astype(np.int64)

    def pooled():
        return f1_from_counts(ConfusionCounts(int(tp.sum()), int(fp.sum()), int(fn.sum())), empty_score)

    current = pooled()
    history = [current]
    converged = False
    passes = 0
    while passes < max_passes:
        passes += 1
        changed = False
        for j in range(m):
            cand, f1, _ = _sweep(
                s[:, j], g[:, j],
                extra_tp=int(tp.sum() - tp[j]),
                extra_fp=int(fp.sum() - fp[j]),
                extra_fn=int(fn.sum() - fn[j]),
                empty_score=empty_score,
            )
            k = int(np.argmax(f1))
            if f1[k] > current and cand[k] != thr[j]:
                thr[j] = cand[k]
                pj = s[:, j] >= thr[j]
                gj = G[:, j]
                tp[j] = np.count_nonzero(pj & gj)
                fp[j] = np.count_nonzero(pj & ~gj)
                fn[j] = np.count_nonzero(~pj & gj)
                current = pooled()
                history.append(current)
                changed = True
        if not changed:
            converged = True
            break
    if not converged:
        warnings.warn(f"micro tuning did not converge in {max_passes} passes", ConvergenceWarning)
    return MultilabelThresholds(thr, "micro", micro_f1(predict(s, thr), g, empty_score),
                                converged=converged, passes=passes, history=history)


def tune_instance(probs, empty_score: float = EMPTY_SCORE) -> np.ndarray:
    """Row-wise expected-F1-optimal predictions from calibrated probabilities.

    Each row is solved exactly with :func:`f1opt.gfm.maximize_expected_f1`,
    treating its labels as independent.  Gold labels are not used.
    """
    try:
        p = as_score_matrix(probs, calibrated=True, name="probs")
    except ValueError as err:
        raise ValueError(f"instance tuning needs calibrated probabilities: {err}") from None
    return np.vstack([gfm.maximize_expected_f1(row, empty_score).h for row in p])


def tune(scores, gold=None, objective: str = "macro", empty_score: float = EMPTY_SCORE):
    """Dispatch to :func:`tune_macro`, :func:`tune_micro` or :func:`tune_instance`."""
    if objective == "macro":
        return tune_macro(scores, gold, empty_score)
    if objective == "micro":
        return tune_micro(scores, gold, empty_score)
    if objective == "instance":
        return tune_instance(scores, empty_score)
    raise ValueError(f"unknown objective {objective!r}")


def expected_instance_f1(probs, pred, empty_score: float = EMPTY_SCORE) -> float:
    """Mean over rows of the exact expected F1 of ``pred`` (rows of length <= 20)."""
    p = as_score_matrix(probs, calibrated=True)
    h = as_label_matrix(pred, "pred")
    return float(np.mean([gfm.brute_force_expected_f1(p[i], h[i], empty_score) for i in range(p.shape[0])]))

