"""Decompositions of the Mobius quadratic form m^T A m.

Three routes: spectral truncation on A, the rank-split through the sawtooth
matrix Z (with its own spectral truncation), and the truncated Fourier
expansion of the sawtooth.  Hard assertions cover only exact identities and
full-index reconstructions; truncation error shapes are reported, never
asserted, because their implied constants are unspecified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .multiplicative import ComplexPower, mertens_oracle
from .operators import DENSE_CAP_DEFAULT, build_operator, mobius_vector
from .sieve import MobiusTable
from .spectral import full_spectrum
from .zeta import constants

RECONSTRUCTION_TOL = 1e-8


def mertens_power(s: complex, n: int, table: MobiusTable) -> complex:
    """M(s, N) = sum_{k<=N} mu(k) k^(-s)."""
    return complex(mertens_oracle(ComplexPower(s), n, table))


def mertens_reciprocal(n: int, table: MobiusTable) -> float:
    """M(1, N) = sum_{k<=N} mu(k)/k, accumulated with fsum."""
    table.require(n)
    return math.fsum(int(table.mu[k]) / k for k in range(1, n + 1))


def quadform(op, v):
    """v^T (op) v; exact integer for the principal operator and integral v."""
    return op.quadform(np.asarray(v))


def psi_exact(num: int, den: int) -> Fraction:
    """psi(num/den) = {num/den} - 1/2 as an exact rational (den > 0)."""
    if den <= 0:
        raise ValueError("psi_exact: denominator must be positive")
    return Fraction(num % den, den) - Fraction(1, 2)


@dataclass(frozen=True)
class QuadformReport:
    n: int
    m_quadform: int              # exact integer m^T A m
    m1n: float                   # sum mu(k)/k up to N
    mn: int                      # M(N)
    route: str                   # "ranksplit" | "spectral" | "z_spectral"
    route_params: dict
    route_value: float           # the route's displayed main terms, over N^2
    residual_terms: dict
    discrepancy: float           # m_quadform/N^2 - route_value


def ranksplit_entrywise_exact(n: int) -> bool:
    """Entrywise A == N^2 f f^T - u u^T / 2 + Z over exact rationals.

    The left side is floor division; the right side combines the rational
    outer products with the exact sawtooth, so the check guards the sign and
    reduction conventions of the Z construction.
    """
    n2 = n * n
    half = Fraction(1, 2)
    for m in range(1, n + 1):
        base = n2 // m
        for k in range(1, n + 1):
            mn = m * k
            lhs = base // k
            rhs = Fraction(n2, mn) - half - psi_exact(n2, mn)
            if lhs != rhs:
                return False
    return True


def ranksplit_check(n: int, table: MobiusTable) -> QuadformReport:
    """Verify the rank-split identity and report its three-term decomposition.

    m^T A m / N^2 = (M(1,N))^2 - (M(N))^2/(2 N^2) + m^T Z m / N^2; the
    entrywise matrix identity is checked exactly, the three-term sum is
    verified in exact rational arithmetic, and floats are reported.
    """
    if not ranksplit_entrywise_exact(n):
        raise ArithmeticError(f"rank-split entrywise identity failed at N={n}")
    n2 = n * n
    a_op = build_operator("A", n)
    m_vec = mobius_vector(n, table)
    mq = a_op.quadform(m_vec)
    mn_val = table.mertens(n)

    # exact rational evaluation of all three terms
    m1n_frac = Fraction(0)
    for k in range(1, n + 1):
        mu_k = int(table.mu[k])
        if mu_k:
            m1n_frac += Fraction(mu_k, k)
    mzm_frac = Fraction(0)
    half = Fraction(1, 2)
    support = [k for k in range(1, n + 1) if table.mu[k]]
    for i in support:
        mi = int(table.mu[i])
        for j in support:
            prod = i * j
            z = half - Fraction(n2 % prod, prod)
            mzm_frac += mi * int(table.mu[j]) * z
    total = m1n_frac**2 - Fraction(mn_val**2, 2 * n2) + mzm_frac / n2
    if total != Fraction(mq, n2):
        raise ArithmeticError(f"rank-split three-term sum failed exactly at N={n}")

    m1n = mertens_reciprocal(n, table)
    z_term = float(mzm_frac) / n2
    route_value = m1n**2 - mn_val**2 / (2.0 * n2) + z_term
    return QuadformReport(
        n=n,
        m_quadform=mq,
        m1n=m1n,
        mn=mn_val,
        route="ranksplit",
        route_params={},
        route_value=route_value,
        residual_terms={
            "mertens_reciprocal_sq": m1n**2,
            "mertens_sq_term": -(mn_val**2) / (2.0 * n2),
            "z_quadform_over_n2": z_term,
        },
        discrepancy=mq / n2 - route_value,
    )


def _error_shape(n: int, k: int, m1n: float) -> float:
    """The reported truncation error shape K^-1/2 + N^-1/2 log N |M(1,N)|
    + N^-1 log^2 N (observational normalizer, no constant asserted)."""
    log_n = max(1.0, math.log(n))
    return k**-0.5 + n**-0.5 * log_n * abs(m1n) + log_n**2 / n


def spectral_truncation_report(
    n: int,
    k_list: Sequence[int],
    table: MobiusTable,
    dense_cap: int = DENSE_CAP_DEFAULT,
) -> list[QuadformReport]:
    """Truncate the spectral expansion of m^T A m / N^2 at each K.

    route_value(K) = (M(1,N))^2 + (||m||^2/N) * sum over eigenvalue indices
    with min(k, N-k) < K of (lambda_k/N)(e_k . m_hat)^2.  The top pair's gap
    against (M(1,N))^2 is carried in residual_terms; adding it back to
    route_value at an all-index K reproduces the exact integer quadratic form
    within RECONSTRUCTION_TOL * (1 + |m^T A m|).
    """
    if n > dense_cap:
        raise ValueError(f"spectral_truncation_report: N={n} exceeds dense_cap")
    spec = full_spectrum(build_operator("A", n, dense_cap=dense_cap))
    m_vec = mobius_vector(n, table)
    mq = build_operator("A", n).quadform(m_vec)
    m1n = mertens_reciprocal(n, table)
    mn_val = table.mertens(n)
    norm2 = float(np.dot(m_vec, m_vec))
    coords = spec.eigenvectors.T @ m_vec.astype(np.float64)
    contribs = spec.eigenvalues * coords**2 / (n * n)  # lambda_k (e_k.m)^2 / N^2
    top_term = float(contribs[-1])
    top_gap = top_term - m1n**2
    full_recon = float(np.sum(contribs))
    reports = []
    for k in k_list:
        if k < 1:
            raise ValueError("spectral_truncation_report: K must be >= 1")
        ks = np.arange(1, n)  # interior indices 1..N-1
        mask = np.minimum(ks, n - ks) < k
        truncated = float(np.sum(contribs[:-1][mask]))
        route_value = m1n**2 + truncated
        discrepancy = mq / (n * n) - route_value
        reports.append(
            QuadformReport(
                n=n,
                m_quadform=mq,
                m1n=m1n,
                mn=mn_val,
                route="spectral",
                route_params={"K": int(k), "m_norm2": norm2},
                route_value=route_value,
                residual_terms={
                    "top_term": top_term,
                    "top_gap": top_gap,
                    "truncated_sum": truncated,
                    "full_reconstruction": full_recon,
                    "reconstruction_error": mq / (n * n) - full_recon,
                    "error_shape": _error_shape(n, int(k), m1n),
                },
                discrepancy=discrepancy,
            )
        )
    return reports


def z_spectral_report(
    n: int,
    k_list: Sequence[int],
    table: MobiusTable,
    dense_cap: int = DENSE_CAP_DEFAULT,
) -> list[QuadformReport]:
    """Same truncation analysis on the sawtooth matrix Z.

    route_value(K) = (M(1,N))^2 - (M(N))^2/(2N^2) + (truncated Z-spectrum
    sum)/N^2 over indices with min(k, N+1-k) < K; with every index included
    the reconstruction is exact to RECONSTRUCTION_TOL."""
    if n > dense_cap:
        raise ValueError(f"z_spectral_report: N={n} exceeds dense_cap")
    spec = full_spectrum(build_operator("Z", n, dense_cap=dense_cap))
    m_vec = mobius_vector(n, table)
    mq = build_operator("A", n).quadform(m_vec)
    m1n = mertens_reciprocal(n, table)
    mn_val = table.mertens(n)
    coords = spec.eigenvectors.T @ m_vec.astype(np.float64)
    contribs = spec.eigenvalues * coords**2 / (n * n)
    base = m1n**2 - mn_val**2 / (2.0 * n * n)
    full_recon = base + float(np.sum(contribs))
    reports = []
    for k in k_list:
        if k < 1:
            raise ValueError("z_spectral_report: K must be >= 1")
        ks = np.arange(1, n + 1)
        mask = np.minimum(ks, n + 1 - ks) < k
        truncated = float(np.sum(contribs[mask]))
        route_value = base + truncated
        reports.append(
            QuadformReport(
                n=n,
                m_quadform=mq,
                m1n=m1n,
                mn=mn_val,
                route="z_spectral",
                route_params={"K": int(k)},
                route_value=route_value,
                residual_terms={
                    "z_quadform_truncated": truncated,
                    "full_reconstruction": full_recon,
                    "reconstruction_error": mq / (n * n) - full_recon,
                    "error_shape": _error_shape(n, int(k), m1n),
                },
                discrepancy=mq / (n * n) - route_value,
            )
        )
    return reports


class TraceZ2Check(NamedTuple):
    ratio: float  # Tr(Z^2) / N^2
    c5: float
    gap: float


def trace_z2_check(n: int) -> TraceZ2Check:
    """Tr(Z^2)/N^2 by direct summation against its limiting constant."""
    if n < 1:
        raise ValueError("trace_z2_check: N must be >= 1")
    n2 = n * n
    idx = np.arange(1, n + 1, dtype=np.int64)
    total = 0.0
    for m0 in range(1, n + 1, 256):
        ms = np.arange(m0, min(m0 + 256, n + 1), dtype=np.int64)[:, None]
        mn = ms * idx[None, :]
        frac = (n2 - (n2 // mn) * mn) / mn
        total += float(np.sum((0.5 - frac) ** 2))
    c5 = constants().c5
    ratio = total / n2
    return TraceZ2Check(ratio=ratio, c5=c5, gap=abs(ratio - c5))


@dataclass(frozen=True)
class PsiTruncation:
    """Per-mode quadratic forms of the truncated sawtooth expansion."""

    h_max: int
    eta: float  # 1/h_max
    per_h: tuple[float, ...]  # m^T Z(h) m for h = 1..h_max


@dataclass(frozen=True)
class FourierReport:
    n: int
    z_quadform: float
    psi: PsiTruncation
    rows: tuple[tuple[int, float, float, float], ...]  # (H, eta, E, normalized)
    broadly_decreasing: bool


def fourier_truncation_report(
    n: int, h_list: Sequence[int], table: MobiusTable
) -> FourierReport:
    """E(H) = |m^T Z m - sum_{h<=H} m^T Z(h) m / (pi h)| for each H.

    H may not exceed N.  Emits E and the normalized ratio
    E * H / (N^2 max(1,log N)^2 log(H+1)); only well-formedness and the
    emitted table are asserted, plus a broad-trend flag on E.
    """
    if not h_list:
        raise ValueError("fourier_truncation_report: empty H list")
    h_max = max(h_list)
    if h_max > n or min(h_list) < 1:
        raise ValueError("fourier_truncation_report: need 1 <= H <= N")
    m_vec = mobius_vector(n, table).astype(np.float64)
    z_quad = float(build_operator("Z", n).quadform(m_vec))
    per_h = tuple(
        float(build_operator("Z_fourier", n, h=h).quadform(m_vec))
        for h in range(1, h_max + 1)
    )
    partial = np.cumsum([v / (math.pi * h) for h, v in enumerate(per_h, start=1)])
    rows = []
    log_n2 = max(1.0, math.log(n)) ** 2
    for h in sorted(h_list):
        e_h = abs(z_quad - float(partial[h - 1]))
        normalized = e_h * h / (n * n * log_n2 * math.log(h + 1))
        rows.append((h, 1.0 / h, e_h, normalized))
    es = [r[2] for r in rows]
    downs = sum(1 for a, b in zip(es, es[1:]) if b <= a + 1e-15)
    broadly = len(es) < 2 or downs >= (len(es) - 1) / 2
    return FourierReport(
        n=n,
        z_quadform=z_quad,
        psi=PsiTruncation(h_max=h_max, eta=1.0 / h_max, per_h=per_h),
        rows=tuple(rows),
        broadly_decreasing=broadly,
    )
