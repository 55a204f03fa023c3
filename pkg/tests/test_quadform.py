import math
from fractions import Fraction

import numpy as np
import pytest

from mertenslab.multiplicative import Principal, mertens_oracle
from mertenslab.operators import build_operator, mobius_vector
from mertenslab.quadform import (
    RECONSTRUCTION_TOL,
    fourier_truncation_report,
    mertens_power,
    mertens_reciprocal,
    psi_exact,
    quadform,
    ranksplit_check,
    ranksplit_entrywise_exact,
    spectral_truncation_report,
    trace_z2_check,
    z_spectral_report,
)
from mertenslab.identities import mertens_via_bilinear
from mertenslab.sieve import sieve_mobius

TABLE = sieve_mobius(10**4)


def test_mertens_power_examples():
    assert mertens_power(1, 2, TABLE) == pytest.approx(0.5)
    assert mertens_power(0, 10, TABLE) == pytest.approx(-1.0)
    assert mertens_power(1, 1, TABLE) == pytest.approx(1.0)


def test_mertens_reciprocal_matches_power():
    for n in (1, 10, 100, 500):
        assert mertens_reciprocal(n, TABLE) == pytest.approx(
            mertens_power(1, n, TABLE).real, abs=1e-12
        )


def test_psi_exact():
    assert psi_exact(4, 1) == Fraction(-1, 2)  # integer argument
    assert psi_exact(9, 2) == Fraction(0)      # {4.5} = 1/2
    assert psi_exact(7, 3) == Fraction(1, 3) - Fraction(1, 2)
    with pytest.raises(ValueError):
        psi_exact(3, 0)


def test_quadform_examples():
    a2 = build_operator("A", 2)
    assert quadform(a2, np.array([1, -1])) == 1
    assert quadform(a2, np.zeros(2)) == 0
    z2 = build_operator("Z", 2)
    assert quadform(z2, np.array([1.0, -1.0])) == pytest.approx(0.0)


def test_quadform_matches_bilinear_identity():
    # cross-module: 2 M(g,N) - quadform == bilinear identity value, exactly
    g = Principal()
    big = sieve_mobius(500 * 500)
    for n in (1, 2, 10, 50, 100, 300, 500):
        rep = mertens_via_bilinear(g, n, big)
        q = build_operator("A", n).quadform(mobius_vector(n, big))
        assert rep.value_identity == 2 * mertens_oracle(g, n, big) - q, n


def test_ranksplit_entrywise():
    for n in (1, 2, 3, 10, 40):
        assert ranksplit_entrywise_exact(n), n


def test_ranksplit_n2_by_hand():
    rep = ranksplit_check(2, TABLE)
    assert rep.m_quadform == 1
    assert rep.mn == 0
    assert rep.m1n == pytest.approx(0.5)
    # terms: (1/2)^2 - 0 + 0 = 1/4
    assert rep.residual_terms["mertens_reciprocal_sq"] == pytest.approx(0.25)
    assert rep.residual_terms["z_quadform_over_n2"] == pytest.approx(0.0)
    assert rep.route_value == pytest.approx(0.25)
    assert rep.discrepancy == pytest.approx(0.0, abs=1e-15)


def test_ranksplit_n1():
    rep = ranksplit_check(1, TABLE)
    # m^T A m = 1 = 1 - 1/2 + 1/2
    assert rep.m_quadform == 1
    assert rep.route_value == pytest.approx(1.0)


def test_ranksplit_n100():
    rep = ranksplit_check(100, TABLE)
    assert abs(rep.discrepancy) * 100 * 100 <= 1e-9 * (1 + abs(rep.m_quadform))


def test_spectral_reconstruction_small():
    # N=2, all indices: reconstruction exact
    reps = spectral_truncation_report(2, [2], TABLE)
    rep = reps[0]
    recon = rep.route_value + rep.residual_terms["top_gap"]
    assert recon * 4 == pytest.approx(rep.m_quadform, abs=1e-10)


def test_spectral_reconstruction_n100():
    reps = spectral_truncation_report(100, [1, 10, 100], TABLE)
    for rep in reps:
        err = rep.residual_terms["reconstruction_error"] * 100 * 100
        assert abs(err) <= RECONSTRUCTION_TOL * (1 + abs(rep.m_quadform))
    # remainder magnitude shrinks broadly as K grows (observational)
    assert abs(reps[-1].discrepancy) <= abs(reps[0].discrepancy) + 1e-12


def test_parseval():
    from mertenslab.spectral import full_spectrum

    for n in (10, 100, 500):
        spec = full_spectrum(build_operator("A", n))
        m = mobius_vector(n, TABLE).astype(np.float64)
        coords = spec.eigenvectors.T @ m
        assert float(np.sum(coords**2)) == pytest.approx(
            float(np.dot(m, m)), rel=1e-8
        )


def test_z_spectral_n2():
    reps = z_spectral_report(2, [2], TABLE)
    rep = reps[0]
    err = rep.residual_terms["reconstruction_error"] * 4
    assert abs(err) <= RECONSTRUCTION_TOL * (1 + abs(rep.m_quadform))


def test_z_spectral_n100_all_k():
    reps = z_spectral_report(100, [100], TABLE)
    rep = reps[0]
    err = rep.residual_terms["reconstruction_error"] * 100 * 100
    assert abs(err) <= RECONSTRUCTION_TOL * (1 + abs(rep.m_quadform))


def test_z_spectral_n1():
    reps = z_spectral_report(1, [1], TABLE)
    # single eigenvalue 1/2
    assert reps[0].m_quadform == 1


def test_trace_z2_small():
    chk = trace_z2_check(2)
    assert chk.ratio == pytest.approx(0.25)
    chk1 = trace_z2_check(1)
    assert chk1.ratio == pytest.approx(0.25)


def test_trace_z2_bound_and_gap():
    for n in (1, 2, 3, 10, 50, 200):
        chk = trace_z2_check(n)
        assert chk.ratio <= 0.25 + 1e-15, n
    assert trace_z2_check(1000).gap < 0.03


def test_fourier_n2_h1():
    rep = fourier_truncation_report(2, [1], TABLE)
    # all Z(1) entries are sin of integer multiples of 2*pi: exactly zero
    assert rep.psi.per_h[0] == pytest.approx(0.0, abs=1e-15)
    assert rep.rows[0][2] == pytest.approx(0.0, abs=1e-15)  # E(1) = |0 - 0|


def test_fourier_n1():
    rep = fourier_truncation_report(1, [1], TABLE)
    assert rep.z_quadform == pytest.approx(0.5)
    assert rep.rows[0][2] == pytest.approx(0.5)


def test_fourier_table_and_trend():
    hs = [1, 2, 4, 8, 16, 32, 64]
    rep = fourier_truncation_report(100, hs, TABLE)
    assert [r[0] for r in rep.rows] == hs
    assert all(math.isfinite(r[3]) for r in rep.rows)
    assert isinstance(rep.broadly_decreasing, bool)


def test_fourier_h_range_enforced():
    with pytest.raises(ValueError):
        fourier_truncation_report(10, [11], TABLE)
    with pytest.raises(ValueError):
        fourier_truncation_report(10, [], TABLE)
