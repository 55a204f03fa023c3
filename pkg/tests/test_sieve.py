import numpy as np
import pytest

from mertenslab.sieve import liouville_values, prime_flags, sieve_mobius


def mobius_by_factorization(n: int) -> int:
    """Independent oracle: trial-division factorization."""
    if n == 1:
        return 1
    count = 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            count += 1
            if n % d == 0:
                return 0
        else:
            d += 1
    if n > 1:
        count += 1
    return (-1) ** count


def test_mu_first_ten_frozen():
    table = sieve_mobius(10)
    assert list(table.mu[1:]) == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_limit_one():
    table = sieve_mobius(1)
    assert list(table.mu[1:]) == [1]
    assert list(table.mertens_prefix[1:]) == [1]


def test_mertens_prefix_ten():
    table = sieve_mobius(10)
    assert table.mertens(10) == -1
    assert table.mertens(10.9) == -1


def test_mu_matches_factorization_oracle():
    table = sieve_mobius(10**4)
    for n in range(1, 10**4 + 1):
        assert table.mu[n] == mobius_by_factorization(n), n


def test_prefix_consistency():
    table = sieve_mobius(5000)
    diffs = np.diff(table.mertens_prefix[1:])
    assert np.array_equal(diffs, table.mu[2:].astype(np.int64))
    assert table.mertens_prefix[1] == 1


def test_mobius_inversion_kernel():
    # sum_{d|n} mu(d) = [n == 1], exhaustively to 10^4
    limit = 10**4
    table = sieve_mobius(limit)
    kernel = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        kernel[d::d] += int(table.mu[d])
    assert kernel[1] == 1
    assert not kernel[2:].any()


def test_rejects_zero():
    with pytest.raises(ValueError):
        sieve_mobius(0)


def test_mertens_bounds_checked():
    table = sieve_mobius(100)
    with pytest.raises(ValueError):
        table.mertens(101)
    with pytest.raises(ValueError):
        table.mertens(-1)


def test_prime_flags_small():
    flags = prime_flags(30)
    primes = [int(p) for p in np.nonzero(flags)[0]]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_liouville_first_ten():
    lam = liouville_values(10)
    assert list(lam[1:]) == [1, -1, -1, 1, -1, 1, -1, -1, 1, 1]


def test_liouville_matches_omega_parity():
    lam = liouville_values(2000)
    for n in range(1, 2001):
        m, omega = n, 0
        d = 2
        while d * d <= m:
            while m % d == 0:
                m //= d
                omega += 1
            d += 1
        if m > 1:
            omega += 1
        assert lam[n] == (-1) ** omega, n


def test_liouville_equals_mu_on_squarefree():
    table = sieve_mobius(3000)
    lam = liouville_values(3000)
    for n in range(1, 3001):
        if table.mu[n] != 0:
            assert lam[n] == table.mu[n]
