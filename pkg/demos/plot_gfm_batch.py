"""
Expected-F1 predictions and the batch effect
============================================

Given independent marginal probabilities, the expected-F1 maximizer picks
how many items to predict and which.  Whether one item is chosen depends on
what else is in the batch.
"""

import numpy as np

from f1opt import maximize_expected_f1
from f1opt.gfm import verify_stopping_threshold

r = maximize_expected_f1([0.5, 0.5])
print("two fair coins:", r.h, f"E[F1]={r.expected_f1:.4f}")

# one item at 0.1 among weak competitors, then among strong ones
weak = maximize_expected_f1([0.1] + [0.01] * 50, empty_score=0.0)
strong = maximize_expected_f1([0.1] + [0.5] * 50, empty_score=0.0)
print("0.1 item chosen among 0.01s:", bool(weak.h[0]))
print("0.1 item chosen among 0.5s: ", bool(strong.h[0]))
print(f"threshold in the strong batch: {strong.expected_f1 / 2:.4f}")

##############################################################################
# Expected F1 as a function of the number of predicted items

for c, e in enumerate(strong.per_c[::10]):
    print(f"  c={10 * c:3d}  E[F1]={e:.4f}")

##############################################################################
# The half-expected-F1 rule is close, but not exact, on small batches

p = np.array([0.266, 0.539])
res = maximize_expected_f1(p)
rep = verify_stopping_threshold(p, res)
print(f"\np={p.tolist()}  prediction={res.h.tolist()}  E[F1]/2={rep.threshold:.4f}")
print("items on the wrong side of E[F1]/2:", rep.mismatched.tolist())
