import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from f1opt.gfm import brute_force_expected_f1
from f1opt.metrics import confusion, f1_from_counts, micro_f1
from f1opt.thresholding import (
    ConvergenceWarning,
    best_threshold,
    expected_instance_f1,
    predict,
    tune,
    tune_instance,
    tune_macro,
    tune_micro,
)


def f1_at(scores, labels, t):
    return f1_from_counts(confusion((np.asarray(scores) >= t).astype(int), labels))


def test_best_threshold_example():
    r = best_threshold([0.9, 0.8, 0.3], [1, 0, 1])
    assert r.threshold == 0.3
    assert r.f1 == pytest.approx(0.8)
    assert r.predicted_positives == 3
    np.testing.assert_allclose(r.sweep[:, 1], [0.0, 2 / 3, 0.5, 0.8])
    assert np.isinf(r.sweep[0, 0])


def test_best_threshold_separable():
    r = best_threshold([0.1, 0.7, 0.2, 0.9, 0.65], [0, 1, 0, 1, 1])
    assert r.f1 == 1.0 and r.threshold == 0.65


def test_best_threshold_no_positives():
    r = best_threshold([0.3, 0.4], [0, 0])
    assert np.isinf(r.threshold) and r.f1 == 1.0
    r = best_threshold([0.3, 0.4], [0, 0], empty_score=0.0)
    assert np.isinf(r.threshold) and r.f1 == 0.0


def test_best_threshold_tie_prefers_larger():
    # t=0.8 -> tp=1 fp=0 fn=1 (2/3); t=0.2 -> tp=2 fp=2 fn=0 (2/3)
    r = best_threshold([0.8, 0.5, 0.4, 0.2], [1, 0, 0, 1])
    assert r.f1 == pytest.approx(2 / 3)
    assert r.threshold == 0.8


def test_best_threshold_inputs():
    with pytest.raises(ValueError):
        best_threshold([], [])
    with pytest.raises(ValueError):
        best_threshold([0.1, 0.2], [1])
    with pytest.raises(ValueError):
        best_threshold([0.1], [2])


def test_result_invariants():
    rng = np.random.default_rng(0)
    s, y = rng.random(50).round(1), rng.integers(0, 2, 50)
    r = best_threshold(s, y)
    assert r.f1 == r.sweep[:, 1].max()
    assert r.threshold in r.sweep[:, 0]


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 100), st.integers(0, 2**32 - 1), st.sampled_from([None, 1, 2]))
def test_sweep_is_optimal_over_all_thresholds(n, seed, decimals):
    rng = np.random.default_rng(seed)
    s = rng.normal(size=n)
    if decimals is not None:
        s = s.round(decimals)
    y = rng.integers(0, 2, n)
    u = np.unique(s)
    # every prediction set reachable by a real threshold: above max, each
    # distinct value, and each midpoint between neighbours
    probes = np.concatenate([[u[-1] + 1.0], u, (u[1:] + u[:-1]) / 2, [u[0] - 1.0]])
    oracle = max(f1_at(s, y, t) for t in probes)
    r = best_threshold(s, y)
    assert r.f1 == pytest.approx(oracle, abs=1e-15)
    assert f1_at(s, y, r.threshold) == pytest.approx(r.f1, abs=1e-15)


def test_calibrated_threshold_law():
    rng = np.random.default_rng(123)
    s = rng.random(100_000)
    y = (rng.random(100_000) < s).astype(int)
    r = best_threshold(s, y)
    assert abs(r.threshold - r.f1 / 2) <= 0.02


def toy_two_label(n=100):
    gold = np.zeros((n, 2), dtype=int)
    gold[: n // 2, 0] = 1
    gold[: n // 10, 1] = 1
    scores = np.column_stack([np.full(n, 0.5), np.full(n, 0.1)])
    return scores, gold


def test_macro_separable():
    gold = np.array([[1, 0], [0, 1], [1, 1], [0, 0]])
    r = tune_macro(gold * 0.8 + 0.1, gold)
    assert r.achieved == 1.0


def test_macro_uninformative_column_predicts_all():
    scores, gold = toy_two_label()
    r = tune_macro(scores, gold)
    np.testing.assert_array_equal(r.per_label, [0.5, 0.1])
    assert predict(scores, r.per_label).all()


def test_macro_two_label_toy():
    scores, gold = toy_two_label()
    r = tune_macro(scores, gold)
    assert r.achieved == pytest.approx((2 / 3 + 2 / 11) / 2, abs=1e-12)
    assert abs(r.achieved - 0.42) <= 0.01


def test_micro_single_label_reduces():
    rng = np.random.default_rng(8)
    s, y = rng.random(60), rng.integers(0, 2, 60)
    r = tune_micro(s[:, None], y[:, None])
    b = best_threshold(s, y)
    assert r.per_label[0] == b.threshold
    assert r.achieved == pytest.approx(b.f1)


def test_micro_separable():
    gold = np.array([[1, 0], [0, 1], [1, 1], [0, 0]])
    assert tune_micro(gold * 0.8 + 0.1, gold).achieved == 1.0


def common_plus_rare(n=1000, seed=0):
    rng = np.random.default_rng(seed)
    common = (rng.random(n) < 0.5).astype(int)
    rare = np.zeros(n, dtype=int)
    rare[rng.choice(n, 10, replace=False)] = 1
    s_common = np.clip(common * 0.6 + rng.normal(0.2, 0.15, n), 0, 1)
    scores = np.column_stack([s_common, np.full(n, 0.01)])
    return scores, np.column_stack([common, rare])


def test_micro_and_macro_diverge_on_rare_uninformative():
    scores, gold = common_plus_rare()
    macro = tune_macro(scores, gold)
    micro = tune_micro(scores, gold)
    assert macro.per_label[1] == 0.01
    assert predict(scores, macro.per_label)[:, 1].all()
    assert np.isinf(micro.per_label[1])
    assert not predict(scores, micro.per_label)[:, 1].any()
    assert micro.achieved >= micro_f1(predict(scores, macro.per_label), gold)


def test_micro_history_is_monotone():
    rng = np.random.default_rng(31)
    n, m = 300, 12
    base = rng.uniform(0.01, 0.5, m)
    gold = (rng.random((n, m)) < base).astype(int)
    scores = np.clip(gold * rng.uniform(0, 0.6, m) + rng.random((n, m)) * 0.7, 0, 1)
    r = tune_micro(scores, gold)
    assert r.converged
    assert np.all(np.diff(r.history) > 0)
    assert r.history[-1] == pytest.approx(r.achieved)


def test_micro_nonconvergence_flag():
    scores, gold = common_plus_rare()
    with pytest.warns(ConvergenceWarning):
        r = tune_micro(scores, gold, max_passes=1)
    assert not r.converged and r.passes == 1


def test_instance_rows():
    pred = tune_instance([[0.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.9, 0.05, 0.0]])
    np.testing.assert_array_equal(pred, [[0, 0, 0], [1, 1, 0], [1, 0, 0]])


def test_instance_matches_brute_force():
    row = [0.9, 0.05]
    cands = [[0, 0], [1, 0], [0, 1], [1, 1]]
    e = [brute_force_expected_f1(row, h) for h in cands]
    assert cands[int(np.argmax(e))] == tune_instance([row])[0].tolist()


def test_instance_needs_probabilities():
    with pytest.raises(ValueError, match="calibrated"):
        tune_instance([[0.5, 1.5]])


def test_expected_instance_f1():
    assert expected_instance_f1([[0.5, 0.5]], [[1, 1]]) == pytest.approx(7 / 12)


def test_tune_dispatch():
    scores, gold = toy_two_label(20)
    assert tune(scores, gold, "macro").objective == "macro"
    assert tune(scores, gold, "micro").objective == "micro"
    assert tune(scores, objective="instance").shape == (20, 2)
    with pytest.raises(ValueError):
        tune(scores, gold, "weighted")
