"""Memory-resident sieves: Mobius values, Mertens prefix sums, Liouville, primes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MobiusTable:
    """mu(1..limit) with running Mertens sums M(1..limit).

    Arrays are 1-indexed (index 0 is a zero placeholder).  This table is the
    source of every exact oracle in the package: identity evaluations are
    always compared against sums read directly from it.
    """

    limit: int
    mu: np.ndarray              # int8, mu[n] in {-1, 0, 1}
    mertens_prefix: np.ndarray  # int64, M(n) = sum_{k<=n} mu(k)

    def mertens(self, x: float) -> int:
        """M(x) = sum_{n<=x} mu(n), exact, for 0 <= x <= limit."""
        if x < 0:
            raise ValueError("mertens: x must be nonnegative")
        n = math.floor(x)
        if n > self.limit:
            raise ValueError(f"mertens: x={x} exceeds table limit {self.limit}")
        return int(self.mertens_prefix[n])

    def require(self, x: float) -> None:
        if math.floor(x) > self.limit:
            raise ValueError(f"table limit {self.limit} too small for x={x}")


def sieve_mobius(limit: int) -> MobiusTable:
    """Sieve mu(1..limit) and its prefix sums.

    O(limit log log limit): one pass per prime flips signs, a second pass per
    prime square zeroes entries with a repeated factor.
    """
    if limit < 1:
        raise ValueError("sieve_mobius: limit must be >= 1")
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, limit + 1):
        if is_prime[p]:
            if p * p <= limit:
                is_prime[p * p :: p] = False
            mu[p::p] *= -1
            if p * p <= limit:
                mu[p * p :: p * p] = 0
    prefix = np.cumsum(mu, dtype=np.int64)
    return MobiusTable(limit=limit, mu=mu, mertens_prefix=prefix)


def prime_flags(limit: int) -> np.ndarray:
    """Boolean array of length limit+1, True exactly at primes."""
    if limit < 0:
        raise ValueError("prime_flags: limit must be >= 0")
    flags = np.ones(limit + 1, dtype=bool)
    flags[: min(2, limit + 1)] = False
    for p in range(2, int(math.isqrt(limit)) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def liouville_values(limit: int) -> np.ndarray:
    """int8 array of lambda(1..limit), index 0 placeholder.

    lambda(n) = (-1)^Omega(n); every prime power p^k <= limit flips the sign
    of its multiples once, so each n is flipped Omega(n) times in total.
    """
    if limit < 1:
        raise ValueError("liouville_values: limit must be >= 1")
    lam = np.ones(limit + 1, dtype=np.int8)
    lam[0] = 0
    flags = prime_flags(limit)
    for p in np.nonzero(flags)[0]:
        pk = int(p)
        while pk <= limit:
            lam[pk::pk] *= -1
            pk *= int(p)
    return lam
