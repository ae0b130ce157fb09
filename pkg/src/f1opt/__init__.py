"""F1-optimal decision thresholds: metrics, analytic rules, expected-F1
maximization, threshold tuning and simulations of its failure modes."""

__version__ = "0.1.0"

from .exceptions import CSVFormatError, EnumerationBoundError, ShapeError, UndefinedMetricError
from .gfm import GfmResult, brute_force_expected_f1, maximize_expected_f1, poisson_binomial
from .metrics import (
    ConfusionCounts,
    accuracy,
    confusion,
    f1_from_counts,
    instance_f1,
    jaccard,
    macro_f1,
    micro_f1,
    multilabel_accuracy,
    precision,
    recall,
)
from .theory import ScoreDistributionPair, calibrated_threshold, solve_optimal_rule
from .thresholding import best_threshold, tune_instance, tune_macro, tune_micro
