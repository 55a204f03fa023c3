import math
import random

import pytest

from mertenslab.identities import (
    HypothesisError,
    Word,
    eratosthenes_pi_check,
    inclusion_exclusion_check,
    meissel_sum,
    mertens_via_bilinear,
    mertens_via_flexible,
    mertens_via_uniform,
    mobius_via_identity,
    term_count_survey,
    words,
)
from mertenslab.multiplicative import ComplexPower, Liouville, Principal, mertens_oracle
from mertenslab.sieve import sieve_mobius

TABLE = sieve_mobius(2 * 10**4)


def test_word_basics():
    w = Word((1, 0, 1))
    assert w.weight == 2
    assert w.mu_star == 1
    assert w.support == (0, 2)
    assert Word((1, 0, 0)).mu_star == -1
    assert len(list(words(3))) == 8
    assert len(list(words(3, min_weight=2))) == 4


def test_meissel_examples():
    assert meissel_sum(1, TABLE) == 1
    assert meissel_sum(0.5, TABLE) == 0
    assert meissel_sum(2.5, TABLE) == 1  # floor(2.5) - floor(1.25)
    with pytest.raises(ValueError):
        meissel_sum(0, TABLE)
    with pytest.raises(ValueError):
        meissel_sum(-2, TABLE)


def test_meissel_random_reals():
    rng = random.Random(11)
    for _ in range(500):
        x = rng.uniform(1e-9, TABLE.limit)
        assert meissel_sum(x, TABLE) == (1 if x >= 1 else 0)


def test_bilinear_n2_by_hand():
    # A(2) = [[4,2],[2,1]], m = (1,-1), m^T A m = 1, M(4) = 2*0 - 1 = -1
    rep = mertens_via_bilinear(Principal(), 2, TABLE)
    assert rep.value_identity == -1
    assert rep.value_oracle == -1
    assert rep.match
    assert rep.term_count == 4


def test_bilinear_n1():
    rep = mertens_via_bilinear(Principal(), 1, TABLE)
    assert rep.value_identity == 1
    assert rep.match


def test_bilinear_liouville_n2():
    g = Liouville(16)
    rep = mertens_via_bilinear(g, 2, TABLE)
    assert rep.match
    assert rep.value_identity == mertens_oracle(g, 4, TABLE)


def test_bilinear_exact_range():
    g = Principal()
    for n in range(1, 61):
        rep = mertens_via_bilinear(g, n, TABLE)
        assert rep.match, n
        assert rep.value_identity == TABLE.mertens(n * n)


def test_bilinear_complex_power():
    g = ComplexPower(0.5)
    rep = mertens_via_bilinear(g, 6, TABLE)
    assert rep.match
    # independent direct evaluation
    direct = sum(
        int(TABLE.mu[n]) * n ** (-0.5) for n in range(1, 37) if TABLE.mu[n]
    )
    assert rep.value_identity == pytest.approx(direct, abs=1e-10)


def test_uniform_collapses_to_bilinear():
    rep = mertens_via_uniform(Principal(), 2, 4, 2, TABLE)
    assert rep.value_identity == -1
    assert rep.match


def test_uniform_examples():
    rep = mertens_via_uniform(Principal(), 3, 27, 3, TABLE)
    assert rep.value_identity == TABLE.mertens(27) == -1
    assert rep.match
    rep = mertens_via_uniform(Principal(), 2, 10, 3, TABLE)
    assert rep.value_identity == -1
    assert rep.match


def test_uniform_hypothesis_violation():
    with pytest.raises(HypothesisError, match=r"\(N\+1\)\^d > K"):
        mertens_via_uniform(Principal(), 2, 10, 2, TABLE)  # 3^2 <= 10
    with pytest.raises(HypothesisError, match="K >= N"):
        mertens_via_uniform(Principal(), 2, 3, 5, TABLE)


def test_uniform_random_instances():
    rng = random.Random(101)
    g = Principal()
    for d in (2, 3, 4):
        for _ in range(8):
            k = rng.randint(2, 5000)
            root = int(round(k ** (1.0 / d)))
            while (root + 1) ** d <= k:
                root += 1
            n = min(k, rng.randint(root, root + max(1, root // 2)))
            rep = mertens_via_uniform(g, d, k, n, TABLE)
            assert rep.match, (d, k, n)


def test_uniform_literal_mode_agrees():
    g = Principal()
    for d, k, n in ((2, 30, 5), (3, 40, 3), (2, 17, 4)):
        fast = mertens_via_uniform(g, d, k, n, TABLE)
        slow = mertens_via_uniform(g, d, k, n, TABLE, literal=True)
        assert fast.value_identity == slow.value_identity


def test_flexible_examples():
    rep = mertens_via_flexible(Principal(), 5, [2, 2], TABLE)
    assert rep.value_identity == -2
    assert rep.match
    rep = mertens_via_flexible(Principal(), 4, [2, 2], TABLE)
    assert rep.value_identity == -1
    rep = mertens_via_flexible(Principal(), 11, [3, 2], TABLE)
    assert rep.value_identity == -2
    assert rep.match


def test_flexible_hypothesis_violation():
    with pytest.raises(HypothesisError, match="fails: 9 >= 9"):
        mertens_via_flexible(Principal(), 9, [2, 2], TABLE)


def test_flexible_specializes_to_bilinear():
    for g in (Principal(), Liouville(2500)):
        for n in (1, 2, 3, 5, 8, 13, 21, 34, 50):
            flex = mertens_via_flexible(g, n * n, [n, n], TABLE)
            bil = mertens_via_bilinear(g, n, TABLE)
            assert flex.value_identity == bil.value_identity, (str(g), n)


def test_flexible_random_instances():
    rng = random.Random(202)
    g = Principal()
    for _ in range(30):
        d = rng.choice((2, 3, 4))
        k = rng.randint(2, 5000)
        # split log K into d random positive parts for the ranges
        weights = [rng.random() + 0.1 for _ in range(d)]
        total = sum(weights)
        ranges = []
        for w in weights:
            ranges.append(max(1, int(k ** (w / total))))
        prod = 1
        for r in ranges:
            prod *= 1 + r
        while prod <= k:
            i = rng.randrange(d)
            prod //= 1 + ranges[i]
            ranges[i] += 1
            prod *= 1 + ranges[i]
        rep = mertens_via_flexible(g, k, ranges, TABLE)
        assert rep.match, (k, ranges)


def test_flexible_literal_mode_agrees():
    g = Principal()
    fast = mertens_via_flexible(g, 29, [5, 4], TABLE)
    slow = mertens_via_flexible(g, 29, [5, 4], TABLE, literal=True)
    assert fast.value_identity == slow.value_identity
    fast = mertens_via_flexible(g, 24, [3, 2, 3], TABLE)
    slow = mertens_via_flexible(g, 24, [3, 2, 3], TABLE, literal=True)
    assert fast.value_identity == slow.value_identity


def test_flexible_liouville_random():
    rng = random.Random(7)
    g = Liouville(3000)
    for _ in range(10):
        k = rng.randint(2, 3000)
        n1 = max(1, int(math.isqrt(k)))
        n2 = k // n1 + 1
        rep = mertens_via_flexible(g, k, [n1, n2], TABLE)
        assert rep.match, (k, n1, n2)


def test_mobius_via_identity_examples():
    assert mobius_via_identity(6, [2, 3], TABLE) == 1
    assert mobius_via_identity(4, [2, 2], TABLE) == 0
    assert mobius_via_identity(7, [2, 3], TABLE) == -1
    assert mobius_via_identity(1, [1, 1], TABLE) == 1


def test_mobius_via_identity_sweep():
    for k in range(1, 1001):
        root = math.isqrt(k)
        if root * root < k:
            root += 1
        ranges = [max(1, root), max(1, root)]
        assert mobius_via_identity(k, ranges, TABLE) == int(TABLE.mu[k]), k


def test_inclusion_exclusion_examples():
    assert inclusion_exclusion_check(2, 3, [1, 1], 100, seed=5)
    assert inclusion_exclusion_check(2, 8, [2, 3], 100, seed=5)
    assert inclusion_exclusion_check(3, 7, [1, 2, 3], 100, seed=5)


def test_inclusion_exclusion_hypothesis():
    with pytest.raises(HypothesisError):
        inclusion_exclusion_check(2, 4, [1, 1], 10)


def test_eratosthenes_examples():
    assert eratosthenes_pi_check(2) == (2, 2, True)
    chk = eratosthenes_pi_check(3)
    assert chk.lhs == 4 and chk.match
    chk = eratosthenes_pi_check(10)
    assert chk.lhs == 25 and chk.match


def test_eratosthenes_sweep():
    for n in range(2, 60):
        assert eratosthenes_pi_check(n).match, n


def test_eratosthenes_capacity():
    with pytest.raises(ValueError):
        eratosthenes_pi_check(10**5)


def test_term_count_survey_shape():
    rows = term_count_survey(2, [1, 20, 50], TABLE)
    assert [r.n for r in rows] == [1, 20, 50]
    assert all(r.term_count > 0 for r in rows)
    assert all(math.isfinite(r.ratio) for r in rows)


def test_term_count_survey_ratio_stability():
    rows = term_count_survey(2, [50, 100, 200], TABLE)
    ratios = [r.ratio for r in rows]
    assert max(ratios) / min(ratios) < 3.0


def test_term_count_survey_d3():
    rows = term_count_survey(3, [20], TABLE)
    assert rows[0].ratio > 0
