"""
Thresholding calibrated scores at half the best F1
==================================================

For calibrated scores the F1-optimal threshold sits at half of the F1 it
achieves.  We draw scores uniformly, draw labels from them, sweep every
threshold and compare.
"""

import numpy as np

from f1opt import best_threshold

rng = np.random.default_rng(0)
scores = rng.random(100_000)
labels = (rng.random(scores.size) < scores).astype(int)

result = best_threshold(scores, labels)
print(f"best threshold  {result.threshold:.4f}")
print(f"best F1         {result.f1:.4f}")
print(f"half of best F1 {result.f1 / 2:.4f}")

# the sweep is kept, so a few points of the F1-vs-threshold curve can be
# inspected directly
for t, f in result.sweep[1:: result.sweep.shape[0] // 8]:
    print(f"  t={t:.3f}  F1={f:.4f}")

##############################################################################
# The same relation on an exact discretized score distribution

from f1opt.theory import boundary_score, calibrated_pair, solve_optimal_rule

grid = np.linspace(0, 1, 201)
dist = calibrated_pair(grid, np.exp(-6 * grid))
rule = solve_optimal_rule(dist)
print(f"\nexact optimum F1 {rule.f1:.4f}, boundary score {boundary_score(rule, dist):.4f}")
