"""Maximizing expected F1 from independent marginal probabilities.

Given probabilities ``p_i`` that each of ``n`` items is positive, with the
items independent, the prediction ``h`` maximizing ``E[F1(h, t)]`` is found
by looping over the number of predicted positives ``c``.  For a fixed ``c``
the expectation is linear in ``h``:

    E[F1 | h, |h| = c] = 2 * sum_i h_i * sum_a z[a][i] / (a + c)

where ``z[a][i] = P(t_i = 1 and sum(t) = a)``, so the best ``h`` of size
``c`` takes the ``c`` largest coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .exceptions import EnumerationBoundError
from .metrics import EMPTY_SCORE

MAX_ENUMERATION = 20


def _probs(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=np.float64).reshape(-1)
    if np.isnan(p).any() or (p < 0).any() or (p > 1).any():
        raise ValueError("probabilities must lie in [0, 1]")
    return p


def poisson_binomial(probs) -> np.ndarray:
    """Distribution of the number of successes among independent Bernoulli trials.

    Returns ``pmf`` of length ``n + 1`` with ``pmf[a] = P(sum t = a)``.
    """
    p = _probs(probs)
    pmf = np.zeros(p.size + 1)
    pmf[0] = 1.0
    for k, pi in enumerate(p, start=1):
        pmf[1 : k + 1] = pmf[1 : k + 1] * (1.0 - pi) + pmf[0:k] * pi
        pmf[0] *= 1.0 - pi
    return pmf


def z_matrix(probs) -> np.ndarray:
    """``z[a, i] = p_i * P(sum_{j != i} t_j = a - 1)``, shape ``(n + 1, n)``.

    Each leave-one-out distribution is rebuilt from scratch rather than
    divided out of the full one; division is unstable when some ``p_i`` is
    near one.
    """
    p = _probs(probs)
    n = p.size
    z = np.zeros((n + 1, n))
    for i in range(n):
        rest = poisson_binomial(np.delete(p, i))
        z[1:, i] = p[i] * rest
    return z


@dataclass(frozen=True)
class GfmResult:
    """Best prediction ``h`` and the best expected F1 at each prediction size.

    ``per_c[c]`` is the expected F1 of the best prediction with exactly
    ``c`` positives.
    """

    h: np.ndarray
    expected_f1: float
    per_c: np.ndarray

    @property
    def c(self) -> int:
        return int(self.h.sum())


def maximize_expected_f1(probs, empty_score: float = EMPTY_SCORE) -> GfmResult:
    """Prediction vector maximizing expected F1 among all ``2^n`` candidates.

    ``empty_score`` is the F1 credited when nothing is predicted and nothing
    is positive, so the empty prediction scores ``empty_score * P(a = 0)``.
    Ties in the per-item coefficients go to the lower index; ties between
    prediction sizes go to the smaller size.
    """
    p = _probs(probs)
    n = p.size
    per_c = np.zeros(n + 1)
    pmf = poisson_binomial(p)
    per_c[0] = empty_score * pmf[0]
    if n == 0:
        return GfmResult(np.zeros(0, dtype=np.int8), float(per_c[0]), per_c)

    z = z_matrix(p)
    a = np.arange(n + 1, dtype=np.float64)
    orders = {}
    for c in range(1, n + 1):
        v = (z[1:] / (a[1:, None] + c)).sum(axis=0)
        order = np.argsort(-v, kind="stable")
        per_c[c] = 2.0 * v[order[:c]].sum()
        orders[c] = order[:c]

    best_c = int(np.argmax(per_c))
    h = np.zeros(n, dtype=np.int8)
    if best_c:
        h[orders[best_c]] = 1
    return GfmResult(h, float(per_c[best_c]), per_c)


def _outcomes(n: int) -> np.ndarray:
    return np.array(list(product((0, 1), repeat=n)), dtype=np.int8).reshape(-1, n)


def brute_force_expected_f1(probs, h, empty_score: float = EMPTY_SCORE):
    """Expected F1 of prediction(s) ``h`` by summing over all ``2^n`` label outcomes.

    ``h`` may be a single vector or a ``(k, n)`` stack of candidates, in
    which case an array of ``k`` expectations is returned.

    Raises
    ------
    EnumerationBoundError
        If ``n`` exceeds ``MAX_ENUMERATION``.
    """
    p = _probs(probs)
    n = p.size
    if n > MAX_ENUMERATION:
        raise EnumerationBoundError(f"n={n} exceeds the enumeration bound {MAX_ENUMERATION}")
    H = np.atleast_2d(np.asarray(h, dtype=np.int64))
    if H.shape[1] != n:
        raise ValueError(f"h has length {H.shape[1]}, probs has {n}")
    T = _outcomes(n).astype(np.int64)
    pt = np.prod(np.where(T == 1, p, 1.0 - p), axis=1)
    tp = H @ T.T
    den = H.sum(axis=1)[:, None] + T.sum(axis=1)[None, :]
    f1 = np.where(den > 0, 2.0 * tp / np.maximum(den, 1), empty_score)
    e = f1 @ pt
    return float(e[0]) if np.ndim(h) == 1 else e


def brute_force_maximum(probs, empty_score: float = EMPTY_SCORE) -> tuple[np.ndarray, float]:
    """Best prediction over all ``2^n`` candidates, by exhaustive evaluation."""
    p = _probs(probs)
    H = _outcomes(p.size)
    e = brute_force_expected_f1(p, H, empty_score)
    k = int(np.argmax(e))
    return H[k], float(e[k])


@dataclass(frozen=True)
class StoppingReport:
    """Comparison of the selected support with ``{i : p_i > E[F1] / 2}``."""

    threshold: float
    holds: bool
    gap: float
    ambiguous: np.ndarray
    mismatched: np.ndarray


def verify_stopping_threshold(probs, result: GfmResult, tol: float = 1e-9) -> StoppingReport:
    """Check that the chosen items are exactly those above half the expected F1.

    Items within ``tol`` of the threshold are reported as ambiguous and
    excluded from the comparison.  ``gap`` is the smallest selected
    probability minus the threshold (``inf`` when nothing is selected).
    """
    p = _probs(probs)
    thr = result.expected_f1 / 2.0
    sel = result.h.astype(bool)
    ambiguous = np.flatnonzero(np.abs(p - thr) <= tol)
    expected = p > thr
    mismatch = np.flatnonzero(sel != expected)
    mismatch = np.setdiff1d(mismatch, ambiguous)
    gap = float(p[sel].min() - thr) if sel.any() else float("inf")
    return StoppingReport(thr, mismatch.size == 0, gap, ambiguous, mismatch)
