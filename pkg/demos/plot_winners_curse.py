"""
The winner's curse for rare labels
==================================

Scores independent of the labels make all-positive the best rule.  Chosen
empirically, the threshold often lands far higher when the label is rare,
because a lucky top score beats the all-positive F1 on the training batch.
"""

import numpy as np

from f1opt.winners_curse import CurseConfig, curse_size, run_curse_simulation

for b in (0.5, 0.1, 0.01, 0.001):
    res = run_curse_simulation(CurseConfig(b, n=10_000, trials=100, seed=1))
    counts, _ = np.histogram(res.fractions, bins=10, range=(0, 1))
    bars = " ".join(f"{c:3d}" for c in counts)
    print(f"b={b:<6} curse size {curse_size(b):>9.0f}  mean fraction {res.fractions.mean():.3f}  [{bars}]")

##############################################################################
# Each row is a ten-bin histogram of the fraction predicted positive.  As the
# base rate drops below the curse size threshold, mass moves to the left.
