"""Compressed divisor-value systems and their exact inverse identity.

For n, take S = {1..isqrt(n)} together with the quotients n//rho, dedup and
sort; U has entries n//(sigma_i sigma_j), T is the 0/1 anti-triangle, and V
holds Mertens values at the entries of U.  The package verifies T U^-1 T = V
entrywise in exact integer/rational arithmetic and reads M(n) off the sum of
the entries of U^-1.

No floating point is used anywhere in this module.  Every inversion route
ends with an exact product check U @ num == den * I, so results are proven,
never trusted from intermediate arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .sieve import MobiusTable

# 30-bit primes: residues and their pairwise products stay well inside int64
_PRIMES_30BIT = (1073741789, 1073741783, 1073741741, 1073741723, 1073741719)


class SingularMatrixError(ArithmeticError):
    """The quotient matrix has determinant zero (no exact inverse)."""


@dataclass(frozen=True)
class CardinalSystem:
    n: int
    s: int
    sigma: tuple[int, ...]
    u: np.ndarray  # int64, s x s
    t: np.ndarray  # int64, 0/1
    v: np.ndarray  # int64, Mertens values at the entries of u


def build_cardinal(n: int, table: MobiusTable) -> CardinalSystem:
    """Construct S and the three matrices; Mertens values come from table."""
    if n < 1:
        raise ValueError("build_cardinal: n must be >= 1")
    table.require(n)
    root = isqrt(n)
    values = sorted({*range(1, root + 1), *(n // rho for rho in range(1, root + 1))})
    sigma = np.asarray(values, dtype=np.int64)
    s = len(values)
    if not 0 <= 2 * root - s <= 1:
        raise AssertionError(f"size identity violated at n={n}: s={s}, root={root}")
    u = n // (sigma[:, None] * sigma[None, :])
    i = np.arange(1, s + 1)
    t = ((i[:, None] + i[None, :]) <= s + 1).astype(np.int64)
    v = table.mertens_prefix[u]
    return CardinalSystem(n=n, s=s, sigma=tuple(values), u=u, t=t, v=v)


def _verify_product(m: np.ndarray, num: np.ndarray, den: int) -> None:
    s = m.shape[0]
    max_num = max((abs(int(x)) for x in num.ravel()), default=0)
    max_m = max((abs(int(x)) for x in m.ravel()), default=0)
    if max_num and max_m and s * max_m * max_num < 2**62 and abs(den) < 2**62:
        prod = m.astype(np.int64) @ num.astype(np.int64)
        target = den * np.eye(s, dtype=np.int64)
    else:
        prod = m.astype(object) @ num.astype(object)
        target = den * np.eye(s, dtype=object)
    if not np.array_equal(prod, target):
        raise ArithmeticError("exact inverse failed its product verification")


def inverse_exact_bareiss(m: np.ndarray) -> tuple[np.ndarray, int]:
    """Fraction-free Gauss-Jordan (Bareiss one-step) inverse over the integers.

    Returns (num, den) with U @ num == den * I; den is +-det(U).  Intermediate
    entries are minors of U, exact in arbitrary-precision ints; the product
    identity is verified before returning.
    """
    s = m.shape[0]
    aug = [
        [int(x) for x in row] + [1 if i == j else 0 for j in range(s)]
        for i, row in enumerate(m.tolist())
    ]
    prev = 1
    for k in range(s):
        if aug[k][k] == 0:
            for r in range(k + 1, s):
                if aug[r][k] != 0:
                    aug[k], aug[r] = aug[r], aug[k]
                    break
            else:
                raise SingularMatrixError("singular matrix in Bareiss elimination")
        piv = aug[k][k]
        row_k = aug[k]
        for i in range(s):
            if i == k:
                continue
            row_i = aug[i]
            fac = row_i[k]
            if fac:
                aug[i] = [(piv * a - fac * b) // prev for a, b in zip(row_i, row_k)]
            elif prev != 1 or piv != 1:
                aug[i] = [(piv * a) // prev for a in row_i]
        prev = piv
    den = aug[s - 1][s - 1]
    num = np.asarray([row[s:] for row in aug], dtype=object)
    # Jordan elimination leaves den on every diagonal entry of the left block
    for i in range(s):
        if aug[i][i] != den:
            raise AssertionError("Bareiss elimination left unequal pivots")
    _verify_product(m, num, den)
    return num, int(den)


def inverse_exact_fraction(m: np.ndarray) -> tuple[np.ndarray, int]:
    """Gauss-Jordan over Fraction, normalized to (num, den); universal fallback."""
    s = m.shape[0]
    a = [
        [Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(s)]
        for i, row in enumerate(m.tolist())
    ]
    for k in range(s):
        piv_row = next((r for r in range(k, s) if a[r][k] != 0), None)
        if piv_row is None:
            raise SingularMatrixError("singular matrix in rational elimination")
        a[k], a[piv_row] = a[piv_row], a[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        for i in range(s):
            if i != k and a[i][k] != 0:
                fac = a[i][k]
                a[i] = [x - fac * y for x, y in zip(a[i], a[k])]
    inv = [row[s:] for row in a]
    den = 1
    for row in inv:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    num = np.asarray([[int(x * den) for x in row] for row in inv], dtype=object)
    _verify_product(m, num, den)
    return num, den


def _inverse_mod_p(m: np.ndarray, p: int) -> np.ndarray | None:
    """Inverse of m mod p by vectorized elimination; None if singular mod p."""
    s = m.shape[0]
    a = np.concatenate([m.astype(np.int64) % p, np.eye(s, dtype=np.int64)], axis=1)
    for k in range(s):
        col = a[k:, k]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            return None
        r = k + int(nz[0])
        if r != k:
            a[[k, r]] = a[[r, k]]
        inv = pow(int(a[k, k]), -1, p)
        a[k] = (a[k] * inv) % p
        factors = a[:, k].copy()
        factors[k] = 0
        a = (a - factors[:, None] * a[k][None, :]) % p
    return a[:, s:]


def _crt_lift(residues: list[np.ndarray], primes: list[int]) -> np.ndarray:
    """Combine residue matrices into symmetric-range integers (object dtype)."""
    combined = residues[0].astype(object)
    modulus = primes[0]
    for res, p in zip(residues[1:], primes[1:]):
        inv = pow(modulus % p, -1, p)
        diff = (res.astype(object) - combined) % p
        combined = combined + modulus * ((diff * inv) % p)
        modulus *= p
    half = modulus // 2
    return np.where(combined > half, combined - modulus, combined)


def inverse_exact_modular(m: np.ndarray, max_primes: int = 5) -> tuple[np.ndarray, int]:
    """Exact integer inverse by modular elimination plus exact verification.

    Computes U^-1 mod one or more 30-bit primes, lifts to the symmetric
    range, and accepts only once U @ X == I holds in exact integer
    arithmetic.  Applicable when the inverse is an integer matrix (true
    whenever the anti-triangle identity holds, since T is unimodular); raises
    ValueError otherwise so callers can fall back to rational elimination.
    """
    residues: list[np.ndarray] = []
    used: list[int] = []
    singular = 0
    for p in _PRIMES_30BIT[:max_primes]:
        res = _inverse_mod_p(m, p)
        if res is None:
            singular += 1
            continue
        residues.append(res)
        used.append(p)
        x = _crt_lift(residues, used)
        try:
            _verify_product(m, x, 1)
        except ArithmeticError:
            continue
        return x, 1
    if residues:
        raise ValueError("inverse not integral within the tried moduli")
    raise SingularMatrixError(f"matrix singular mod {singular} distinct primes")


def inverse_exact(m: np.ndarray, method: str = "auto") -> tuple[np.ndarray, int]:
    """(num, den) with m @ num == den * I, exact; den is never zero.

    method "auto" tries the fast modular route and falls back to rational
    elimination when the inverse is not integral; "bareiss", "modular", and
    "fraction" force one route.
    """
    if method == "bareiss":
        return inverse_exact_bareiss(m)
    if method == "modular":
        return inverse_exact_modular(m)
    if method == "fraction":
        return inverse_exact_fraction(m)
    if method != "auto":
        raise ValueError(f"unknown inversion method {method!r}")
    try:
        return inverse_exact_modular(m)
    except ValueError:
        return inverse_exact_fraction(m)


def verify_cardinal_identity(system: CardinalSystem, method: str = "auto") -> bool:
    """Entrywise exact check of T U^-1 T == V over the rationals."""
    num, den = inverse_exact(system.u, method)
    t = system.t.astype(object)
    lhs = t @ num @ t
    rhs = system.v.astype(object) * den
    return bool(np.array_equal(lhs, rhs))


def mertens_via_cardinal(
    n: int,
    table: MobiusTable,
    system: CardinalSystem | None = None,
    method: str = "auto",
) -> int:
    """M(n) as the sum of all entries of U^-1 (asserted integral)."""
    if system is None:
        system = build_cardinal(n, table)
    num, den = inverse_exact(system.u, method)
    total = sum(int(x) for x in num.ravel())
    q, r = divmod(total, den)
    if r != 0:
        raise ArithmeticError(
            f"entry sum of inverse is not an integer at n={n}: {total}/{den}"
        )
    return q
