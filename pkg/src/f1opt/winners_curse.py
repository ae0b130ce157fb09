"""Monte Carlo study of empirically chosen F1 thresholds on uninformative scores.

Every trial draws ``n`` scores ``b + N(0, sigma^2)`` and, independently,
``n`` labels ``Bernoulli(b)``, then picks the F1-maximizing threshold on
that batch.  The analytically optimal rule always predicts every example
positive; the simulation measures how often the empirical choice strays
from it.

Seeding: trial ``k`` uses ``numpy.random.default_rng(SeedSequence(seed,
spawn_key=(k,)))``, which is the ``k``-th child of
``SeedSequence(seed).spawn``.  Within a trial the ``n`` standard normals
are drawn first, then ``n`` uniforms for the labels (``u < b``).  Results
therefore do not depend on trial order or on how trials are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .thresholding import best_threshold

HIST_BINS = 50
FULL_SCALE_TRIALS = 10_000
FULL_SCALE_N = 1_000_000


@dataclass(frozen=True)
class CurseConfig:
    base_rate: float
    n: int = 100_000
    sigma: float = 1.0
    trials: int = 500
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.base_rate < 1.0:
            raise ValueError(f"base_rate must lie in (0, 1), got {self.base_rate}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class CurseResult:
    """Per-trial outcomes.

    ``empirical_f1`` is the winning F1 on the training batch.
    ``population_f1`` is the expected F1 of predicting the same fraction
    ``f`` positive on fresh data, ``2bf / (b + f)``, and ``regret`` is
    ``2b / (1 + b)`` minus that.
    """

    config: CurseConfig
    fractions: np.ndarray
    thresholds: np.ndarray
    empirical_f1: np.ndarray
    population_f1: np.ndarray
    regret: np.ndarray
    histogram: np.ndarray
    bin_edges: np.ndarray

    def share_below(self, fraction: float) -> float:
        return float(np.mean(self.fractions < fraction))

    def share_at_least(self, fraction: float) -> float:
        return float(np.mean(self.fractions >= fraction))

    def threshold_histogram(self, bins: int = HIST_BINS) -> tuple[np.ndarray, np.ndarray, int]:
        """Histogram of finite chosen thresholds, and the count of ``+inf`` choices."""
        finite = self.thresholds[np.isfinite(self.thresholds)]
        if finite.size == 0:
            return np.zeros(bins, dtype=np.int64), np.linspace(0, 1, bins + 1), self.thresholds.size
        counts, edges = np.histogram(finite, bins=bins)
        return counts, edges, int(self.thresholds.size - finite.size)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def run_trial(config: CurseConfig, trial: int) -> tuple[float, float, float]:
    """Return ``(fraction_positive, threshold, empirical_f1)`` for one trial."""
    rng = trial_rng(config.seed, trial)
    scores = config.base_rate + config.sigma * rng.standard_normal(config.n)
    labels = rng.random(config.n) < config.base_rate
    res = best_threshold(scores, labels)
    return res.predicted_positives / config.n, res.threshold, res.f1


def run_curse_simulation(config: CurseConfig) -> CurseResult:
    out = np.array([run_trial(config, k) for k in range(config.trials)])
    fractions, thresholds, emp = out[:, 0], out[:, 1], out[:, 2]
    b = config.base_rate
    pop = np.where(fractions > 0, 2 * b * fractions / (b + fractions), 0.0)
    regret = all_positive_f1(b) - pop
    hist, edges = np.histogram(fractions, bins=HIST_BINS, range=(0.0, 1.0))
    return CurseResult(config, fractions, thresholds, emp, pop, regret, hist, edges)


def smax_f1(base_rate: float, n: int) -> float:
    """F1 of predicting only the top-scored example, given that it is positive."""
    if not 0.0 < base_rate < 1.0 or n < 1:
        raise ValueError("need 0 < base_rate < 1 and n >= 1")
    return 2.0 / (2.0 + base_rate * n)


def phase_boundary(n: int) -> float:
    """Base rate above which the all-positive F1 beats the top-one F1: ``(sqrt(1 + 8/n) - 1) / 2``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return (math.sqrt(1.0 + 8.0 / n) - 1.0) / 2.0


def curse_size(base_rate: float) -> float:
    """Sample size ``(1 - b) / b^2`` below which a high threshold wins with constant probability."""
    return (1.0 - base_rate) / base_rate**2


def curse_region(base_rate: float, n: int) -> bool:
    return n < curse_size(base_rate)


def all_positive_f1(base_rate: float) -> float:
    """Expected F1 of the all-positive threshold as the batch grows, ``2b / (1 + b)``."""
    if not 0.0 < base_rate <= 1.0:
        raise ValueError("base_rate must lie in (0, 1]")
    return 2.0 * base_rate / (1.0 + base_rate)


@dataclass(frozen=True)
class AllPositiveReference:
    reference: float
    exact: float | None


def all_positive_f1_distribution(base_rate: float, n: int | None = None) -> AllPositiveReference:
    """Reference ``2b / (1 + b)`` and, given ``n``, the exact finite-batch mean.

    The exact value is ``E[2a / (a + n)]`` with ``a ~ Binomial(n, b)``.
    """
    ref = all_positive_f1(base_rate)
    if n is None:
        return AllPositiveReference(ref, None)
    a = np.arange(n + 1)
    exact = float(np.sum(binom.pmf(a, n, base_rate) * 2 * a / (a + n)))
    return AllPositiveReference(ref, exact)
