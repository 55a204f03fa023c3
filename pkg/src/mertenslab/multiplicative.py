"""Totally multiplicative weights g and the summatory machinery built on them.

Four variants are supported: the constant-1 weight, the Liouville function,
Dirichlet characters given by their residue table, and complex powers n^(-s).
Every variant exposes pointwise values, partial sums sum_{k<=x} g(k), and is
immutable after construction so callers may share instances freely.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from math import floor, isqrt

import numpy as np

from .sieve import MobiusTable, liouville_values


class TotallyMultiplicative:
    """Base class: g(rs) = g(r)g(s) for all positive integers r, s."""

    #: True when g takes values in the integers (enables exact arithmetic).
    integer_valued: bool = False

    def value(self, n: int):
        raise NotImplementedError

    def partial_sum(self, x: float):
        """sum_{k <= x} g(k); the empty sum for x < 1."""
        raise NotImplementedError

    def values_upto(self, n: int) -> np.ndarray:
        """Vector [g(1), ..., g(n)] with a placeholder at index 0."""
        raise NotImplementedError

    def partial_sums_at(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized partial sums at integer arguments xs (>= 0)."""
        raise NotImplementedError


class Principal(TotallyMultiplicative):
    """g(n) = 1 for every n; partial sums are exact floors."""

    integer_valued = True

    def value(self, n: int) -> int:
        return 1

    def partial_sum(self, x: float) -> int:
        return max(0, floor(x))

    def values_upto(self, n: int) -> np.ndarray:
        vals = np.ones(n + 1, dtype=np.int64)
        vals[0] = 0
        return vals

    def partial_sums_at(self, xs: np.ndarray) -> np.ndarray:
        return np.maximum(xs.astype(np.int64), 0)

    def __str__(self) -> str:
        return "principal"


class Liouville(TotallyMultiplicative):
    """g(n) = lambda(n) = (-1)^Omega(n), tabulated up to a fixed limit."""

    integer_valued = True

    def __init__(self, limit: int):
        self.limit = limit
        self._values = liouville_values(limit)
        self._prefix = np.cumsum(self._values, dtype=np.int64)

    def _check(self, n: int) -> None:
        if n > self.limit:
            raise ValueError(f"Liouville table limit {self.limit} too small for {n}")

    def value(self, n: int) -> int:
        self._check(n)
        return int(self._values[n])

    def partial_sum(self, x: float) -> int:
        n = max(0, floor(x))
        self._check(n)
        return int(self._prefix[n])

    def values_upto(self, n: int) -> np.ndarray:
        self._check(n)
        return self._values[: n + 1].astype(np.int64)

    def partial_sums_at(self, xs: np.ndarray) -> np.ndarray:
        idx = np.maximum(xs.astype(np.int64), 0)
        self._check(int(idx.max(initial=0)))
        return self._prefix[idx]

    def __str__(self) -> str:
        return "liouville"


class DirichletCharacter(TotallyMultiplicative):
    """A character mod q given by its value on each residue class 0..q-1.

    Construction validates that the table vanishes exactly on residues not
    coprime to q and samples total multiplicativity chi(rs) = chi(r)chi(s).
    """

    def __init__(self, q: int, values):
        if q < 1:
            raise ValueError("character modulus must be >= 1")
        vals = tuple(complex(v) for v in values)
        if len(vals) != q:
            raise ValueError(f"need {q} residue values, got {len(vals)}")
        for r, v in enumerate(vals):
            coprime = math.gcd(r, q) == 1
            if coprime and v == 0:
                raise ValueError(f"character vanishes on coprime residue {r}")
            if not coprime and v != 0:
                raise ValueError(f"character nonzero on non-coprime residue {r}")
        self.q = q
        self._values = vals
        prefix = [0j] * (q + 1)
        for k in range(1, q + 1):
            prefix[k] = prefix[k - 1] + vals[k % q]
        self._prefix = tuple(prefix)
        self._period_sum = prefix[q]
        self._check_multiplicativity()
        self.integer_valued = all(v.imag == 0 and v.real == int(v.real) for v in vals)

    def _check_multiplicativity(self, bound: int = 30) -> None:
        top = min(bound, 3 * self.q)
        for r in range(1, top + 1):
            for s in range(1, top + 1):
                lhs = self._values[(r * s) % self.q]
                rhs = self._values[r % self.q] * self._values[s % self.q]
                if abs(lhs - rhs) > 1e-12:
                    raise ValueError(f"values not totally multiplicative at ({r},{s})")

    def value(self, n: int):
        v = self._values[n % self.q]
        return int(v.real) if self.integer_valued else v

    def partial_sum(self, x: float):
        n = max(0, floor(x))
        full, rem = divmod(n, self.q)
        s = full * self._period_sum + self._prefix[rem]
        return int(round(s.real)) if self.integer_valued else s

    def values_upto(self, n: int) -> np.ndarray:
        base = np.asarray(self._values, dtype=np.complex128)
        reps = n // self.q + 2
        tiled = np.tile(base, reps)
        out = np.zeros(n + 1, dtype=np.complex128)
        out[1:] = tiled[1 : n + 1]
        return out

    def partial_sums_at(self, xs: np.ndarray) -> np.ndarray:
        idx = np.maximum(xs.astype(np.int64), 0)
        full, rem = np.divmod(idx, self.q)
        prefix = np.asarray(self._prefix, dtype=np.complex128)
        return full * self._period_sum + prefix[rem]

    def __str__(self) -> str:
        return f"character(q={self.q})"


class ComplexPower(TotallyMultiplicative):
    """g(n) = n^(-s) for a fixed complex s.

    Partial sums are direct summation (no analytic continuation); intended
    for desk-scale arguments, roughly x <= 10^7.
    """

    def __init__(self, s: complex):
        self.s = complex(s)  # computes in complex arithmetic even at s = 0

    def value(self, n: int) -> complex:
        return cmath.exp(-self.s * math.log(n)) if n > 1 else complex(1.0)

    def partial_sum(self, x: float) -> complex:
        n = max(0, floor(x))
        return complex(self.partial_sums_at(np.asarray([n]))[0])

    def values_upto(self, n: int) -> np.ndarray:
        out = np.zeros(n + 1, dtype=np.complex128)
        if n >= 1:
            ks = np.arange(1, n + 1, dtype=np.float64)
            out[1:] = np.exp(-self.s * np.log(ks))
        return out

    def partial_sums_at(self, xs: np.ndarray) -> np.ndarray:
        idx = np.maximum(xs.astype(np.int64), 0)
        top = int(idx.max(initial=0))
        cums = np.zeros(top + 1, dtype=np.complex128)
        if top >= 1:
            cums[1:] = np.cumsum(self.values_upto(top)[1:])
        return cums[idx]

    def __str__(self) -> str:
        return f"power(s={self.s})"


def partial_sum(g: TotallyMultiplicative, x: float):
    """sum_{k<=x} g(k).  Integer for integer-valued g, complex otherwise."""
    return g.partial_sum(x)


def mertens_oracle(g: TotallyMultiplicative, x: float, table: MobiusTable):
    """Direct-sieve evaluation of sum_{n<=x} mu(n) g(n).

    This is the oracle every identity is checked against; it reads mu straight
    from the table and never goes through an identity.  Exact integer for
    integer-valued g; otherwise summed in input order 1..floor(x).
    """
    if x < 0:
        raise ValueError("mertens_oracle: x must be nonnegative")
    n = floor(x)
    table.require(n)
    if n == 0:
        return 0 if g.integer_valued else 0j
    if isinstance(g, Principal):
        return table.mertens(n)
    mu = table.mu[: n + 1].astype(np.int64)
    vals = g.values_upto(n)
    if g.integer_valued:
        return int(np.dot(mu, np.real(vals).astype(np.int64)))
    prods = mu * vals
    return complex(math.fsum(prods.real), math.fsum(prods.imag))


def divisor_summatory(r: int, x: float) -> int:
    """D_r(x) = sum_{l<=x} tau_r(l), tau_r counting ordered r-factorizations.

    Plain recursion D_r(x) = sum_{k<=x} D_{r-1}(x/k) with D_0 = [x >= 1],
    memoized on the distinct floor values; exact integer.  Negative x gives 0
    by convention.
    """
    if r < 0:
        raise ValueError("divisor_summatory: r must be >= 0")
    if r > 8:
        raise ValueError("divisor_summatory: recursion depth capped at r <= 8")
    if x < 1:
        return 0
    n = floor(x)
    memo: dict[tuple[int, int], int] = {}

    def rec(j: int, m: int) -> int:
        if m <= 0:
            return 0
        if j == 0:
            return 1
        if j == 1:
            return m
        key = (j, m)
        cached = memo.get(key)
        if cached is not None:
            return cached
        total = 0
        for k in range(1, m + 1):
            total += rec(j - 1, m // k)
        memo[key] = total
        return total

    return rec(r, n)


class FoldTable:
    """Values G_j(v) = sum_{k1...kj <= v} g(k1)...g(kj) on the floor set of K.

    The floor set {K // t : t >= 1} is closed under further floor division,
    so one pair of arrays per level j (arguments <= sqrt(K), and K//t for
    t <= sqrt(K)) answers every query arising inside identity enumerations in
    O(1).  Levels are built bottom-up by block-summing g over runs of equal
    floor quotient.  All arithmetic stays in int for integer-valued g.
    """

    def __init__(self, g: TotallyMultiplicative, cap: int, max_level: int):
        if cap < 1:
            raise ValueError("FoldTable: cap must be >= 1")
        self.g = g
        self.cap = cap
        self.max_level = max_level
        root = isqrt(cap)
        self.root = root
        zero = 0 if g.integer_valued else 0j

        def gsum(v: int):
            s = g.partial_sum(v)
            return int(s) if g.integer_valued else complex(s)

        # level 1 is the plain partial sum of g
        small = [zero] * (root + 1)
        for q in range(1, root + 1):
            small[q] = gsum(q)
        large = [zero] * (root + 1)
        for t in range(1, root + 1):
            large[t] = gsum(cap // t)
        self._small = [None, small]
        self._large = [None, large]
        for level in range(2, max_level + 1):
            self._build_level(level, zero)

    def _build_level(self, level: int, zero) -> None:
        cap, root = self.cap, self.root
        sum_small, sum_large = self._small[1], self._large[1]
        prev_small, prev_large = self._small[level - 1], self._large[level - 1]

        def prev(v: int):
            return prev_small[v] if v <= root else prev_large[cap // v]

        def sums(v: int):
            return sum_small[v] if v <= root else sum_large[cap // v]

        def fold_at(v: int):
            total = zero
            k = 1
            while k <= v:
                q = v // k
                k2 = v // q
                total += (sums(k2) - sums(k - 1)) * prev(q)
                k = k2 + 1
            return total

        small = [zero] * (root + 1)
        for q in range(1, root + 1):
            small[q] = fold_at(q)
        large = [zero] * (root + 1)
        for t in range(root, 0, -1):
            large[t] = fold_at(cap // t)
        self._small.append(small)
        self._large.append(large)

    def get(self, level: int, v: int):
        """G_level at a floor value v of cap (0 <= v <= cap)."""
        if v <= 0:
            return 0 if self.g.integer_valued else 0j
        if level == 0:
            return 1
        if level > self.max_level:
            raise ValueError(f"FoldTable built to level {self.max_level}, asked {level}")
        if v <= self.root:
            return self._small[level][v]
        return self._large[level][self.cap // v]


def g_fold_sum(g: TotallyMultiplicative, r: int, x: float):
    """G_r(x) = sum over k1*...*kr <= x of g(k1)...g(kr).

    Satisfies G_r(x) = sum_{k<=x} g(k) G_{r-1}(x/k) with G_0 = [x >= 1]; for
    the constant-1 weight this equals divisor_summatory(r, x) exactly (the two
    are implemented independently and cross-checked in the tests).
    """
    if r < 0:
        raise ValueError("g_fold_sum: r must be >= 0")
    if r > 8:
        raise ValueError("g_fold_sum: recursion depth capped at r <= 8")
    if x < 1:
        return 0 if g.integer_valued else 0j
    n = floor(x)
    if r == 0:
        return 1
    return FoldTable(g, n, r).get(r, n)


def mobius_reciprocal_sum_exact(table: MobiusTable, n: int) -> Fraction:
    """sum_{k<=n} mu(k)/k as an exact rational."""
    table.require(n)
    total = Fraction(0)
    for k in range(1, n + 1):
        m = int(table.mu[k])
        if m:
            total += Fraction(m, k)
    return total
