"""Analytic results about F1-optimal decisions over known score distributions.

Class-conditional score densities are represented as probability masses on
a finite, increasing grid of score values, so integrals over decision
regions become sums over grid cells.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import EMPTY_SCORE, ConfusionCounts, accuracy, f1_from_counts, jaccard

MASS_TOL = 1e-9
RULE_TOL = 1e-6


@dataclass(frozen=True)
class ScoreDistributionPair:
    """Score masses conditional on the positive (``p1``) and negative (``p0``) class.

    ``base_rate`` is the prior probability of the positive class.
    """

    grid: np.ndarray
    p1: np.ndarray
    p0: np.ndarray
    base_rate: float

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        p1 = np.asarray(self.p1, dtype=np.float64)
        p0 = np.asarray(self.p0, dtype=np.float64)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p0", p0)
        if grid.ndim != 1 or grid.shape != p1.shape or grid.shape != p0.shape:
            raise ValueError("grid, p1 and p0 must be 1-D arrays of equal length")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if (p1 < 0).any() or (p0 < 0).any():
            raise ValueError("masses must be non-negative")
        for name, p in (("p1", p1), ("p0", p0)):
            if abs(p.sum() - 1.0) > MASS_TOL:
                raise ValueError(f"{name} must sum to 1, sums to {p.sum()!r}")
        if not 0.0 < self.base_rate < 1.0:
            raise ValueError(f"base_rate must lie in (0, 1), got {self.base_rate}")

    def likelihood_ratio(self) -> np.ndarray:
        """``b p1 / ((1 - b) p0)`` per grid point.

        Points with positive mass only under ``p1`` get ``+inf``; points with
        no mass under either class get ``nan``.
        """
        b = self.base_rate
        num = b * self.p1
        den = (1.0 - b) * self.p0
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = num / den
        lam[(den == 0) & (num > 0)] = np.inf
        lam[(den == 0) & (num == 0)] = np.nan
        return lam


@dataclass(frozen=True)
class OptimalRuleResult:
    decision: np.ndarray
    f1: float
    jaccard: float
    rates: ConfusionCounts
    likelihood_ratio: np.ndarray

    def check_partition(self, tol: float = RULE_TOL) -> bool:
        """True if selected points have ratio >= J and rejected ones <= J, within ``tol``."""
        lam = self.likelihood_ratio
        J = self.jaccard
        slack = tol * max(1.0, J)
        live = ~np.isnan(lam)
        on = live & (self.decision == 1)
        off = live & (self.decision == 0)
        return bool(np.all(lam[on] >= J - slack) and np.all(lam[off] <= J + slack))


def calibrated_pair(grid, marginal) -> ScoreDistributionPair:
    """Build the class-conditional masses of a calibrated score.

    Given the marginal mass ``q(s)`` of scores in [0, 1], calibration
    ``P(t=1 | s) = s`` fixes ``p1 ∝ s q(s)`` and ``p0 ∝ (1 - s) q(s)``.
    """
    grid = np.asarray(grid, dtype=np.float64)
    q = np.asarray(marginal, dtype=np.float64)
    q = q / q.sum()
    if (grid < 0).any() or (grid > 1).any():
        raise ValueError("calibrated scores must lie in [0, 1]")
    b = float(np.dot(grid, q))
    return ScoreDistributionPair(grid, grid * q / b, (1.0 - grid) * q / (1.0 - b), b)


def confusion_fractions(dist: ScoreDistributionPair, decision) -> ConfusionCounts:
    """Fractional confusion entries (summing to one) of a decision rule on the grid."""
    d = np.asarray(decision).astype(bool)
    if d.shape != dist.grid.shape:
        raise ValueError(f"decision has length {d.size}, grid has {dist.grid.size}")
    b = dist.base_rate
    return ConfusionCounts(
        tp=b * float(dist.p1[d].sum()),
        fp=(1.0 - b) * float(dist.p0[d].sum()),
        fn=b * float(dist.p1[~d].sum()),
        tn=(1.0 - b) * float(dist.p0[~d].sum()),
    )


def solve_optimal_rule(dist: ScoreDistributionPair) -> OptimalRuleResult:
    """Find the decision rule on the grid that maximizes F1.

    The optimum is always a superlevel set of the likelihood ratio, so grid
    points are ranked by ratio and every ratio level is tried as a cut.
    Points tied on the ratio enter together; when two cuts give the same
    F1 the larger positive region wins.
    """
    lam = dist.likelihood_ratio()
    live = ~np.isnan(lam)
    if not live.any():
        raise ValueError("degenerate distribution: no grid point carries mass")
    b = dist.base_rate
    idx = np.flatnonzero(live)
    order = idx[np.argsort(-lam[idx], kind="stable")]
    tp_gain = b * dist.p1[order]
    fp_gain = (1.0 - b) * dist.p0[order]
    lam_sorted = lam[order]

    # cut points: ends of runs of equal ratio
    ends = np.flatnonzero(np.append(lam_sorted[1:] != lam_sorted[:-1], True)) + 1
    tp = np.concatenate([[0.0], np.cumsum(tp_gain)[ends - 1]])
    fp = np.concatenate([[0.0], np.cumsum(fp_gain)[ends - 1]])
    fn = b - tp
    den = 2 * tp + fp + np.maximum(fn, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        f1 = np.where(den > 0, 2 * tp / den, EMPTY_SCORE)
    best = f1.max()
    k = int(np.flatnonzero(f1 >= best - 1e-12)[-1])

    decision = np.zeros(dist.grid.size, dtype=np.int8)
    if k > 0:
        decision[order[: ends[k - 1]]] = 1
    rates = confusion_fractions(dist, decision)
    f = f1_from_counts(rates)
    return OptimalRuleResult(decision, f, jaccard(rates), rates, lam)


def boundary_score(result: OptimalRuleResult, dist: ScoreDistributionPair) -> float:
    """Smallest grid score in the positive region of a monotone rule."""
    on = np.flatnonzero(result.decision)
    if on.size == 0:
        return float("inf")
    return float(dist.grid[on].min())


def calibrated_threshold(max_f1: float) -> float:
    """Optimal threshold on calibrated probabilities: half the best achievable F1."""
    if not 0.0 <= max_f1 <= 1.0:
        raise ValueError(f"max_f1 must lie in [0, 1], got {max_f1}")
    return max_f1 / 2.0


def uninformative_expected_f1(base_rate: float, n: int, c) -> float:
    """Expected F1 of predicting ``c`` of ``n`` examples positive with no information.

    With ``a = b n`` actual positives the expectation is ``2 c b / (a + c)``,
    increasing in ``c`` and maximal at ``c = n`` where it equals ``2b / (1 + b)``.
    """
    if not 0.0 < base_rate < 1.0:
        raise ValueError(f"base_rate must lie in (0, 1), got {base_rate}")
    c = np.asarray(c, dtype=np.float64)
    if (c < 0).any() or (c > n).any():
        raise ValueError("c must satisfy 0 <= c <= n")
    a = base_rate * n
    out = 2.0 * c * base_rate / (a + c)
    return float(out) if out.ndim == 0 else out


def uninformative_curve(base_rates) -> np.ndarray:
    """Best expected F1 ``2b / (1 + b)`` of an uninformative classifier per base rate."""
    b = np.asarray(base_rates, dtype=np.float64)
    if ((b <= 0) | (b >= 1)).any():
        raise ValueError("base rates must lie in (0, 1)")
    return 2.0 * b / (1.0 + b)


@dataclass(frozen=True)
class RareLabelImpact:
    f1_perfect: float
    f1_all_negative: float

    @property
    def ratio(self) -> float:
        return self.f1_perfect / self.f1_all_negative if self.f1_all_negative else float("inf")


def rare_label_impact(tp, fp, fn, base_rate, n, empty_score: float = EMPTY_SCORE) -> RareLabelImpact:
    """Micro F1 with a rare label predicted perfectly versus predicted all negative.

    ``tp``, ``fp`` and ``fn`` are pooled over the other labels; the rare
    label has ``base_rate * n`` positives.
    """
    bn = base_rate * n
    if min(tp, fp, fn, bn) < 0:
        raise ValueError("counts must be non-negative")
    perfect = ConfusionCounts(tp + bn, fp, fn)
    negative = ConfusionCounts(tp, fp, fn + bn)
    return RareLabelImpact(
        f1_from_counts(perfect, empty_score), f1_from_counts(negative, empty_score)
    )


FIGURES = {
    "f1-vs-tp": "F1 against true positives, one line per fixed false-positive count",
    "accuracy-vs-tp": "accuracy against true positives, one line per fixed false-positive count",
    "f1-vs-tn": "F1 against true negatives, one line per fixed false-negative count",
}


def emit_f1_surface(kind: str, fixed_values, positives: int, negatives: int) -> list[dict]:
    """Curve rows ``{figure, fixed, x, y}`` for the basic shape plots of F1 and accuracy.

    ``positives`` and ``negatives`` are the actual class counts, held fixed.

    * ``f1-vs-tp``: F1 for ``tp = 0..positives`` at each fixed ``fp``.
    * ``accuracy-vs-tp``: accuracy along the same axis.
    * ``f1-vs-tn``: F1 for ``tn = 0..negatives`` at each fixed ``fn``.
    """
    if kind not in FIGURES:
        raise ValueError(f"unknown curve {kind!r}; choose from {sorted(FIGURES)}")
    if positives < 0 or negatives < 0:
        raise ValueError("class counts must be non-negative")
    rows = []
    for fixed in fixed_values:
        fixed = int(fixed)
        if kind == "f1-vs-tn":
            if not 0 <= fixed <= positives:
                raise ValueError(f"fn={fixed} outside 0..{positives}")
            for tn in range(negatives + 1):
                c = ConfusionCounts(tp=positives - fixed, fp=negatives - tn, fn=fixed, tn=tn)
                rows.append({"figure": kind, "fixed": fixed, "x": tn, "y": f1_from_counts(c)})
            continue
        if not 0 <= fixed <= negatives:
            raise ValueError(f"fp={fixed} outside 0..{negatives}")
        for tp in range(positives + 1):
            c = ConfusionCounts(tp=tp, fp=fixed, fn=positives - tp, tn=negatives - fixed)
            y = f1_from_counts(c) if kind == "f1-vs-tp" else accuracy(c)
            rows.append({"figure": kind, "fixed": fixed, "x": tp, "y": y})
    return rows


def uninformative_rows(base_rates) -> list[dict]:
    vals = uninformative_curve(base_rates)
    return [{"figure": "uninformative", "base_rate": float(b), "expected_f1": float(v)}
            for b, v in zip(np.asarray(base_rates, dtype=float), vals)]
