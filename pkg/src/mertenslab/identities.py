"""Exact Mertens identities: bilinear, uniform-range, and flexible-range forms.

Every evaluator returns an IdentityReport comparing the identity's value to a
direct sieve oracle.  All arithmetic is exact (Python ints) whenever the
weight g is integer-valued; complex-valued weights are accumulated in a fixed
lexicographic enumeration order so runs are bit-reproducible.
"""

from __future__ import annotations

import math
import time
from bisect import bisect_right
from dataclasses import dataclass
from itertools import product as _bitproduct
from typing import NamedTuple, Sequence

import numpy as np

from .multiplicative import (
    FoldTable,
    Principal,
    TotallyMultiplicative,
    mertens_oracle,
)
from .sieve import MobiusTable, prime_flags

COMPLEX_MATCH_TOL = 1e-9


class HypothesisError(ValueError):
    """A range hypothesis of one of the identities fails (named inequality)."""


@dataclass(frozen=True)
class Word:
    """Binary word selecting which summation variables are range-restricted."""

    bits: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.bits)

    @property
    def mu_star(self) -> int:
        """Inclusion-exclusion sign (-1)^weight."""
        return -1 if self.weight % 2 else 1

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if b)


def words(d: int, min_weight: int = 0):
    """All binary words of length d, lexicographic, weight >= min_weight."""
    for bits in _bitproduct((0, 1), repeat=d):
        w = Word(bits)
        if w.weight >= min_weight:
            yield w


@dataclass(frozen=True)
class IdentityReport:
    identity: str  # "bilinear" | "uniform" | "flexible"
    params: dict
    value_identity: int | complex
    value_oracle: int | complex
    term_count: int
    elapsed: float
    match: bool


def _values_match(value, oracle, integer_valued: bool) -> bool:
    if integer_valued:
        return value == oracle
    return abs(value - oracle) <= COMPLEX_MATCH_TOL * (1 + abs(value))


def _squarefree_weights(g: TotallyMultiplicative, limit: int, table: MobiusTable):
    """Squarefree n <= limit (ascending) with weights mu(n)g(n), zeros dropped."""
    table.require(limit)
    mu = table.mu[: limit + 1]
    ns = np.nonzero(mu)[0]
    if g.integer_valued:
        vals = np.real(g.values_upto(limit)).astype(np.int64)
        ws = mu[ns].astype(np.int64) * vals[ns]
    else:
        ws = mu[ns].astype(np.complex128) * g.values_upto(limit)[ns]
    keep = ws != 0
    ns, ws = ns[keep], ws[keep]
    return [int(n) for n in ns], [int(w) for w in ws] if g.integer_valued else list(ws)


def _fold_tuple_sum(ns, ws, limits, cap: int, fold: FoldTable, level: int):
    """sum over restricted tuples of prod(w_i) * G_level(cap // prod(n_i)).

    Tuples run lexicographically over the squarefree support: n_i <= limits[i]
    and prod(n_i) <= cap.  Returns (total, tuple_count).
    """
    total = 0
    count = 0
    get = fold.get
    last = len(limits) - 1

    def rec(i: int, prod: int, coeff):
        nonlocal total, count
        bound = min(limits[i], cap // prod)
        hi = bisect_right(ns, bound)
        if i == last:
            for j in range(hi):
                total += coeff * ws[j] * get(level, cap // (prod * ns[j]))
            count += hi
        else:
            for j in range(hi):
                rec(i + 1, prod * ns[j], coeff * ws[j])

    if limits:
        rec(0, 1, 1)
    return total, count


def _literal_tuple_sum(g, ns, ws, limits, cap: int, k_count: int):
    """Debug route: enumerate the inner k-variables literally instead of
    collapsing them through fold sums.  Exponential; small cap only."""
    total = 0
    last = len(limits) - 1

    def reck(j: int, prod: int, acc):
        nonlocal total
        if j == k_count:
            total += acc
            return
        k = 1
        while prod * k <= cap:
            reck(j + 1, prod * k, acc * g.value(k))
            k += 1

    def recn(i: int, prod: int, coeff):
        bound = min(limits[i], cap // prod)
        hi = bisect_right(ns, bound)
        for j in range(hi):
            n = ns[j]
            if i == last:
                reck(0, prod * n, coeff * ws[j])
            else:
                recn(i + 1, prod * n, coeff * ws[j])

    if limits:
        recn(0, 1, 1)
    return total


def meissel_sum(x: float, table: MobiusTable) -> int:
    """sum_{n<=x} floor(x/n) mu(n); equals 1 for x >= 1 and 0 for 0 < x < 1."""
    if x <= 0:
        raise ValueError("meissel_sum: x must be positive")
    n = math.floor(x)
    table.require(n)
    if n == 0:
        return 0
    ks = np.arange(1, n + 1, dtype=np.int64)
    return int(np.dot(n // ks, table.mu[1 : n + 1].astype(np.int64)))


def mertens_via_bilinear(
    g: TotallyMultiplicative, n: int, table: MobiusTable
) -> IdentityReport:
    """M(g, N^2) = 2 M(g, N) - m^T A(g,N) m with m_k = mu(k)g(k).

    The quadratic form runs over the squarefree support only; entries of
    A(g,N) are partial sums of g at N^2/(jk).  Fully exact for integer-valued
    g.  The report compares against the direct sieve sum up to N^2.
    """
    if n < 1:
        raise ValueError("mertens_via_bilinear: N must be >= 1")
    table.require(n * n)
    t0 = time.perf_counter()
    n2 = n * n
    ns, ws = _squarefree_weights(g, n, table)
    ns_arr = np.asarray(ns, dtype=np.int64)
    integer = g.integer_valued
    ws_arr = np.asarray(ws, dtype=np.int64 if integer else np.complex128)
    quad = 0
    for j, wj in zip(ns, ws):
        entries = g.partial_sums_at(n2 // (j * ns_arr))
        if integer:
            quad += wj * int(np.dot(entries.astype(np.int64), ws_arr))
        else:
            quad += wj * complex(np.dot(entries, ws_arr))
    value = 2 * mertens_oracle(g, n, table) - quad
    oracle = mertens_oracle(g, n2, table)
    elapsed = time.perf_counter() - t0
    return IdentityReport(
        identity="bilinear",
        params={"N": n, "g": str(g)},
        value_identity=value,
        value_oracle=oracle,
        term_count=len(ns) ** 2,
        elapsed=elapsed,
        match=_values_match(value, oracle, integer),
    )


def mertens_via_uniform(
    g: TotallyMultiplicative,
    d: int,
    k: int,
    n: int,
    table: MobiusTable,
    literal: bool = False,
) -> IdentityReport:
    """Uniform-range identity: M(g,K) from mu(1..N) when (N+1)^d > K >= N.

    M(g,K) = d*M(g,N) - sum_{r=2}^{d} (-1)^r C(d,r) * T_r, where T_r sums
    mu(n_1)g(n_1)...mu(n_r)g(n_r) * G_{r-1}(K/(n_1...n_r)) over n_i <= N.
    Hypothesis checks are exact integer comparisons.
    """
    if d < 2:
        raise ValueError("mertens_via_uniform: d must be >= 2")
    if n < 1 or k < 1:
        raise ValueError("mertens_via_uniform: K and N must be >= 1")
    if k < n:
        raise HypothesisError(f"hypothesis K >= N fails: K={k} < N={n}")
    if (n + 1) ** d <= k:
        raise HypothesisError(f"hypothesis (N+1)^d > K fails: ({n}+1)^{d} <= {k}")
    table.require(k)
    t0 = time.perf_counter()
    fold = FoldTable(g, k, d - 1)
    ns, ws = _squarefree_weights(g, n, table)
    correction = 0
    term_count = 0
    for r in range(2, d + 1):
        t_r, c_r = _fold_tuple_sum(ns, ws, [n] * r, k, fold, r - 1)
        if literal:
            t_r = _literal_tuple_sum(g, ns, ws, [n] * r, k, r - 1)
        correction += (-1) ** r * math.comb(d, r) * t_r
        term_count += c_r
    value = d * mertens_oracle(g, n, table) - correction
    oracle = mertens_oracle(g, k, table)
    elapsed = time.perf_counter() - t0
    return IdentityReport(
        identity="uniform",
        params={"d": d, "K": k, "N": n, "g": str(g)},
        value_identity=value,
        value_oracle=oracle,
        term_count=term_count,
        elapsed=elapsed,
        match=_values_match(value, oracle, g.integer_valued),
    )


def mertens_via_flexible(
    g: TotallyMultiplicative,
    k: int,
    ranges: Sequence[int],
    table: MobiusTable,
    literal: bool = False,
) -> IdentityReport:
    """Independent-range identity: M(g,K) from mu over ranges N_1..N_d.

    Requires K < (1+N_1)...(1+N_d).  Sums over binary words V of weight >= 2;
    variables outside the support of V are frozen at 1, so each word
    contributes a tuple sum over its support with a fold sum of order
    weight(V)-1 on the inside.
    """
    d = len(ranges)
    if d < 2:
        raise ValueError("mertens_via_flexible: need at least two ranges")
    if k < 1 or any(r < 1 for r in ranges):
        raise ValueError("mertens_via_flexible: K and all ranges must be >= 1")
    bound = 1
    for r in ranges:
        bound *= 1 + r
    if k >= bound:
        raise HypothesisError(
            f"hypothesis K < (1+N_1)...(1+N_d) fails: {k} >= {bound}"
        )
    table.require(k)
    t0 = time.perf_counter()
    fold = FoldTable(g, k, d - 1)
    max_range = min(max(ranges), k)
    ns, ws = _squarefree_weights(g, max_range, table)
    value = sum(mertens_oracle(g, min(r, k), table) for r in ranges)
    term_count = 0
    for word in words(d, min_weight=2):
        limits = [min(ranges[i], k) for i in word.support]
        t_v, c_v = _fold_tuple_sum(ns, ws, limits, k, fold, word.weight - 1)
        if literal:
            t_v = _literal_tuple_sum(g, ns, ws, limits, k, word.weight - 1)
        value -= word.mu_star * t_v
        term_count += c_v
    oracle = mertens_oracle(g, k, table)
    elapsed = time.perf_counter() - t0
    return IdentityReport(
        identity="flexible",
        params={"K": k, "ranges": tuple(ranges), "g": str(g)},
        value_identity=value,
        value_oracle=oracle,
        term_count=term_count,
        elapsed=elapsed,
        match=_values_match(value, oracle, g.integer_valued),
    )


def mobius_via_identity(k: int, ranges: Sequence[int], table: MobiusTable) -> int:
    """mu(K) as a difference of two flexible-identity evaluations.

    Both K and K-1 must satisfy the range hypothesis; K = 1 returns
    M(1) - 0 = 1 directly.
    """
    if k < 1:
        raise ValueError("mobius_via_identity: K must be >= 1")
    g = Principal()
    if k == 1:
        return 1
    at_k = mertens_via_flexible(g, k, ranges, table).value_identity
    at_km1 = mertens_via_flexible(g, k - 1, ranges, table).value_identity
    return at_k - at_km1


def inclusion_exclusion_check(
    d: int,
    k: int,
    ranges: Sequence[int],
    trials: int,
    seed: int = 0,
) -> bool:
    """Verify sum_V mu*(V) sum_1^K(V) f = 0 for random integer-valued f.

    f is supported on tuples with n_1...n_d <= K; the range hypothesis
    K < prod(1+N_i) guarantees the alternating word sum vanishes, and the
    check is exact.  Returns True iff all trials give exactly zero.
    """
    import random

    if d < 2 or len(ranges) != d:
        raise ValueError("inclusion_exclusion_check: need d >= 2 matching ranges")
    bound = 1
    for r in ranges:
        bound *= 1 + r
    if k >= bound:
        raise HypothesisError(
            f"hypothesis K < (1+N_1)...(1+N_d) fails: {k} >= {bound}"
        )
    domain: list[tuple[int, ...]] = []

    def build(prefix: tuple[int, ...], prod: int) -> None:
        if len(prefix) == d:
            domain.append(prefix)
            return
        n = 1
        while prod * n <= k:
            build(prefix + (n,), prod * n)
            n += 1

    build((), 1)
    if len(domain) > 2_000_000:
        raise ValueError("inclusion_exclusion_check: domain too large")
    word_list = list(words(d))
    rng = random.Random(seed)
    for _ in range(trials):
        f = {t: rng.randint(-9, 9) for t in domain}
        total = 0
        for word in word_list:
            supp = word.support
            part = sum(
                v for t, v in f.items() if all(t[i] <= ranges[i] for i in supp)
            )
            total += word.mu_star * part
        if total != 0:
            return False
    return True


class PrimeCountCheck(NamedTuple):
    lhs: int
    rhs: int
    match: bool


def eratosthenes_pi_check(n: int, capacity: int = 10**8) -> PrimeCountCheck:
    """pi(N^2) two ways: direct prime sieve vs. the smooth-squarefree sum.

    rhs = pi(N) - 1 + sum over squarefree d <= N^2 with all prime factors
    <= N of mu(d) * floor(N^2/d); d is enumerated as products of distinct
    primes <= N so mu(d) is read off the construction.
    """
    if n < 2:
        raise ValueError("eratosthenes_pi_check: N must be >= 2")
    n2 = n * n
    if n2 > capacity:
        raise ValueError(f"eratosthenes_pi_check: N^2 = {n2} exceeds capacity")
    flags = prime_flags(n2)
    lhs = int(np.count_nonzero(flags))
    pi_n = int(np.count_nonzero(flags[: n + 1]))
    primes = [int(p) for p in np.nonzero(flags[: n + 1])[0]]
    total = 0

    def dfs(idx: int, dval: int, sign: int) -> None:
        nonlocal total
        total += sign * (n2 // dval)
        for j in range(idx, len(primes)):
            nxt = dval * primes[j]
            if nxt > n2:
                break
            dfs(j + 1, nxt, -sign)

    dfs(0, 1, 1)
    rhs = pi_n - 1 + total
    return PrimeCountCheck(lhs=lhs, rhs=rhs, match=lhs == rhs)


class TermCountRow(NamedTuple):
    n: int
    term_count: int
    ratio: float


def term_count_survey(
    d: int, n_list: Sequence[int], table: MobiusTable | None = None
) -> list[TermCountRow]:
    """Count the tuples the uniform identity enumerates at K = N^d.

    term_count totals, over r = 2..d, the combined tuples
    (n_1..n_r, k_1..k_{r-1}) with every mu(n_i) != 0 and full product <= K
    (inner k-tuples counted through fold sums of the constant-1 weight),
    plus the squarefree single terms of the leading Mertens sum.  The ratio
    normalizes by N^d * max(1, log N)^(2d-2), the max guarding N = 1.
    """
    if d < 2:
        raise ValueError("term_count_survey: d must be >= 2")
    from .sieve import sieve_mobius

    if table is None:
        table = sieve_mobius(max(n_list))
    g = Principal()
    rows = []
    for n in n_list:
        k = n**d
        fold = FoldTable(g, k, d - 1)
        ns, _ = _squarefree_weights(g, n, table)
        ones = [1] * len(ns)
        count = len(ns)
        for r in range(2, d + 1):
            combined, _tuples = _fold_tuple_sum(ns, ones, [n] * r, k, fold, r - 1)
            count += combined
        norm = (n**d) * max(1.0, math.log(n)) ** (2 * d - 2)
        rows.append(TermCountRow(n=n, term_count=count, ratio=count / norm))
    return rows
