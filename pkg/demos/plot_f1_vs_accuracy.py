"""
How F1 and accuracy respond to the confusion counts
===================================================

Accuracy is linear in true positives; F1 is concave in them and ignores
true negatives altogether, which makes rare labels behave oddly.
"""

from f1opt.theory import emit_f1_surface, rare_label_impact, uninformative_curve

rows = emit_f1_surface("f1-vs-tp", [0, 20], positives=40, negatives=60)
for fp in (0, 20):
    ys = [r["y"] for r in rows if r["fixed"] == fp]
    print(f"F1 vs tp at fp={fp}:", " ".join(f"{y:.2f}" for y in ys[::8]))

rows = emit_f1_surface("accuracy-vs-tp", [20], positives=40, negatives=60)
print("accuracy vs tp at fp=20:", " ".join(f"{r['y']:.2f}" for r in rows[::8]))

##############################################################################
# A rare label adds little to micro F1 when the other labels dominate

for tp in (1000, 10):
    r = rare_label_impact(tp, tp // 10, tp // 10, 0.01, 1000)
    print(f"tp={tp:5d}: perfect/all-negative on the rare label = {r.ratio:.4f}")

print("best F1 without information at b=0.1, 0.5:", uninformative_curve([0.1, 0.5]).round(3))
