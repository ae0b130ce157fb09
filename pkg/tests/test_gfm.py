from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from f1opt.exceptions import EnumerationBoundError
from f1opt.gfm import (
    brute_force_expected_f1,
    brute_force_maximum,
    maximize_expected_f1,
    poisson_binomial,
    verify_stopping_threshold,
    z_matrix,
)


def enumerate_expected_f1(probs, h, empty=1.0):
    """Reference expectation: loop over outcomes in plain Python."""
    total = 0.0
    for t in product((0, 1), repeat=len(probs)):
        pt = 1.0
        for ti, pi in zip(t, probs):
            pt *= pi if ti else 1 - pi
        tp = sum(a and b for a, b in zip(h, t))
        den = sum(h) + sum(t)
        total += pt * (2 * tp / den if den else empty)
    return total


def test_poisson_binomial_fair_pair():
    np.testing.assert_allclose(poisson_binomial([0.5, 0.5]), [0.25, 0.5, 0.25])


def test_poisson_binomial_deterministic():
    np.testing.assert_array_equal(poisson_binomial([1.0, 1.0, 0.0]), [0, 0, 1, 0])


def test_poisson_binomial_matches_enumeration():
    p = [0.9, 0.6, 0.1]
    expected = np.zeros(4)
    for t in product((0, 1), repeat=3):
        expected[sum(t)] += np.prod([pi if ti else 1 - pi for ti, pi in zip(t, p)])
    np.testing.assert_allclose(poisson_binomial(p), expected, atol=1e-15)


@given(st.lists(st.floats(0, 1), min_size=0, max_size=30))
def test_poisson_binomial_is_a_distribution(p):
    pmf = poisson_binomial(p)
    assert pmf.size == len(p) + 1
    assert np.all(pmf >= 0)
    assert pmf.sum() == pytest.approx(1.0, abs=1e-9)


def test_rejects_out_of_range():
    with pytest.raises(ValueError):
        poisson_binomial([0.5, 1.2])


def test_z_single_item():
    z = z_matrix([0.3])
    assert z[1, 0] == pytest.approx(0.3) and z[0, 0] == 0


def test_z_fair_pair():
    np.testing.assert_allclose(z_matrix([0.5, 0.5]), [[0, 0], [0.25, 0.25], [0.25, 0.25]])


def test_z_matches_enumeration():
    p = [0.2, 0.7, 0.45, 0.9]
    z = np.zeros((5, 4))
    for t in product((0, 1), repeat=4):
        pt = np.prod([pi if ti else 1 - pi for ti, pi in zip(t, p)])
        z[sum(t)] += pt * np.array(t)
    np.testing.assert_allclose(z_matrix(p), z, atol=1e-15)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=15))
def test_z_marginalizes(p):
    np.testing.assert_allclose(z_matrix(p).sum(axis=0), p, atol=1e-9)


def test_single_item():
    r = maximize_expected_f1([0.6])
    assert r.h.tolist() == [1]
    assert r.expected_f1 == pytest.approx(0.6)
    assert r.per_c[0] == pytest.approx(0.4)


def test_fair_pair_is_seven_twelfths():
    r = maximize_expected_f1([0.5, 0.5])
    assert r.h.tolist() == [1, 1]
    assert r.expected_f1 == pytest.approx(7 / 12, abs=1e-12)


def test_brute_force_fair_pair():
    assert brute_force_expected_f1([0.5, 0.5], [1, 1]) == pytest.approx(
        0.25 * 0 + 0.25 * 2 / 3 + 0.25 * 2 / 3 + 0.25 * 1
    )


def test_brute_force_empty_prediction():
    p = [0.3, 0.8, 0.1]
    assert brute_force_expected_f1(p, [0, 0, 0]) == pytest.approx(0.7 * 0.2 * 0.9)
    assert brute_force_expected_f1(p, [0, 0, 0], empty_score=0.0) == 0.0


def test_brute_force_point_mass():
    assert brute_force_expected_f1([1, 0, 1, 1], [1, 1, 0, 1]) == pytest.approx(2 * 2 / (3 + 3))


def test_brute_force_bound():
    with pytest.raises(EnumerationBoundError):
        brute_force_expected_f1(np.full(21, 0.5), np.ones(21))


@pytest.mark.parametrize("empty", [1.0, 0.0])
def test_library_brute_force_matches_reference(empty):
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        p = rng.random(n)
        h = rng.integers(0, 2, n)
        assert brute_force_expected_f1(p, h, empty) == pytest.approx(
            enumerate_expected_f1(p, h, empty), abs=1e-12
        )


@pytest.mark.parametrize("empty", [1.0, 0.0])
def test_oracle_equivalence(empty):
    rng = np.random.default_rng(17)
    for _ in range(150):
        n = int(rng.integers(1, 11))
        p = rng.random(n) ** rng.uniform(0.3, 3)
        r = maximize_expected_f1(p, empty)
        _, best = brute_force_maximum(p, empty)
        assert r.expected_f1 == pytest.approx(best, abs=1e-9)
        assert brute_force_expected_f1(p, r.h, empty) == pytest.approx(r.expected_f1, abs=1e-9)
        assert r.expected_f1 == r.per_c.max()
        assert r.c == int(np.argmax(r.per_c))


def test_consistency_at_twenty():
    p = np.random.default_rng(1).random(20)
    r = maximize_expected_f1(p)
    assert brute_force_expected_f1(p, r.h) == pytest.approx(r.expected_f1, abs=1e-9)


def test_per_c_matches_brute_force_top_c():
    rng = np.random.default_rng(9)
    p = rng.random(7)
    r = maximize_expected_f1(p)
    H = np.array(list(product((0, 1), repeat=7)))
    e = brute_force_expected_f1(p, H)
    for c in range(8):
        assert r.per_c[c] == pytest.approx(e[H.sum(axis=1) == c].max(), abs=1e-12)


def test_swap_never_helps():
    rng = np.random.default_rng(4)
    for _ in range(30):
        n = int(rng.integers(2, 9))
        p = rng.random(n)
        r = maximize_expected_f1(p)
        if r.c in (0, n):
            continue
        base = brute_force_expected_f1(p, r.h)
        for i in np.flatnonzero(r.h):
            for j in np.flatnonzero(r.h == 0):
                h = r.h.copy()
                h[i], h[j] = 0, 1
                assert brute_force_expected_f1(p, h) <= base + 1e-12


def test_ties_go_to_lower_index():
    r = maximize_expected_f1([0.02, 0.9, 0.02, 0.02], empty_score=0.0)
    assert r.h.tolist() == [0, 1, 0, 0]
    r = maximize_expected_f1([0.5, 0.5, 0.5, 0.01])
    assert r.h[:3].tolist() == [1, 1, 1]


def test_uninformative_all_positive_with_zero_empty_score():
    for b in (0.01, 0.1, 0.5, 0.9):
        for n in (1, 5, 20):
            r = maximize_expected_f1(np.full(n, b), empty_score=0.0)
            assert r.h.tolist() == [1] * n


def test_uninformative_rare_prefers_empty_under_default():
    # crediting the all-negative outcome makes predicting nothing worth P(a = 0)
    r = maximize_expected_f1(np.full(20, 0.01))
    assert r.c == 0
    assert r.expected_f1 == pytest.approx(0.99**20, abs=1e-12)


def test_uninformative_expectation_approaches_limit():
    b = 0.5
    gaps = []
    for n in (5, 20, 200):
        r = maximize_expected_f1(np.full(n, b), empty_score=0.0)
        gaps.append(abs(r.expected_f1 - 2 * b / (1 + b)))
    assert gaps[0] > gaps[1] > gaps[2]


def test_batch_observation():
    low = maximize_expected_f1([0.1] + [0.01] * 50, empty_score=0.0)
    high = maximize_expected_f1([0.1] + [0.5] * 50, empty_score=0.0)
    assert low.h[0] == 1
    assert high.h[0] == 0
    assert high.expected_f1 / 2 > 0.1


def test_stopping_threshold_fair_pair():
    p = [0.5, 0.5]
    rep = verify_stopping_threshold(p, maximize_expected_f1(p))
    assert rep.threshold == pytest.approx(7 / 24)
    assert rep.holds
    assert rep.gap == pytest.approx(0.5 - 7 / 24)


def test_stopping_threshold_certain():
    p = [1.0, 0.0]
    r = maximize_expected_f1(p)
    assert r.h.tolist() == [1, 0] and r.expected_f1 == 1.0
    rep = verify_stopping_threshold(p, r)
    assert rep.threshold == 0.5 and rep.holds


def test_stopping_threshold_counterexample():
    # exact optimum skips an item whose probability exceeds half the optimum
    p = [0.266, 0.539]
    r = maximize_expected_f1(p)
    h, best = brute_force_maximum(p)
    assert h.tolist() == [0, 1] == r.h.tolist()
    assert best == pytest.approx(r.expected_f1, abs=1e-12)
    rep = verify_stopping_threshold(p, r)
    assert p[0] > rep.threshold
    assert not rep.holds
    assert rep.mismatched.tolist() == [0]


def test_stopping_threshold_is_approximate():
    """The support is always a top-c set, and misses sit close to the threshold."""
    rng = np.random.default_rng(2024)
    misses = 0
    for _ in range(400):
        n = int(rng.integers(1, 11))
        p = rng.random(n)
        r = maximize_expected_f1(p, empty_score=0.0)
        if r.c:
            assert p[r.h == 1].min() >= np.sort(p)[::-1][r.c - 1]
        rep = verify_stopping_threshold(p, r)
        if not rep.holds:
            misses += 1
            assert np.all(np.abs(p[rep.mismatched] - rep.threshold) < 0.1)
    assert 0 < misses < 100


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=8))
def test_oracle_property(p):
    r = maximize_expected_f1(p)
    _, best = brute_force_maximum(p)
    assert r.expected_f1 == pytest.approx(best, abs=1e-9)
