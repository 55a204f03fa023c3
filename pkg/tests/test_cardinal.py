import math

import numpy as np
import pytest

from mertenslab.cardinal import (
    SingularMatrixError,
    build_cardinal,
    inverse_exact,
    inverse_exact_bareiss,
    inverse_exact_fraction,
    inverse_exact_modular,
    mertens_via_cardinal,
    verify_cardinal_identity,
)
from mertenslab.operators import build_operator
from mertenslab.sieve import sieve_mobius

TABLE = sieve_mobius(2500)


def test_build_n4_by_hand():
    sys4 = build_cardinal(4, TABLE)
    assert sys4.sigma == (1, 2, 4)
    assert sys4.s == 3
    assert sys4.u.tolist() == [[4, 2, 1], [2, 1, 0], [1, 0, 0]]
    assert sys4.t.tolist() == [[1, 1, 1], [1, 1, 0], [1, 0, 0]]
    assert sys4.v.tolist() == [[-1, 0, 1], [0, 1, 0], [1, 0, 0]]


def test_build_n1():
    sys1 = build_cardinal(1, TABLE)
    assert sys1.sigma == (1,)
    assert sys1.u.tolist() == [[1]]
    assert sys1.t.tolist() == [[1]]
    assert sys1.v.tolist() == [[1]]
    assert verify_cardinal_identity(sys1)
    assert mertens_via_cardinal(1, TABLE) == 1


def test_build_n9():
    sys9 = build_cardinal(9, TABLE)
    assert sys9.sigma == (1, 2, 3, 4, 9)
    assert sys9.s == 5
    a3 = build_operator("A", 3).dense()
    assert np.array_equal(sys9.u[:3, :3], a3)


def test_inverse_n4_by_hand():
    sys4 = build_cardinal(4, TABLE)
    expected = [[0, 0, 1], [0, 1, -2], [1, -2, 0]]
    for route in (inverse_exact_bareiss, inverse_exact_modular, inverse_exact_fraction):
        num, den = route(sys4.u)
        assert den == 1
        assert num.tolist() == expected, route.__name__


def test_mertens_n4():
    assert mertens_via_cardinal(4, TABLE) == -1


def test_mertens_n81_matches_sieve():
    assert mertens_via_cardinal(81, TABLE) == TABLE.mertens(81)


def test_verify_n100():
    assert verify_cardinal_identity(build_cardinal(100, TABLE))


def test_routes_agree_on_sample():
    for n in (2, 7, 16, 50, 121, 300, 1000):
        sysn = build_cardinal(n, TABLE)
        nb, db = inverse_exact_bareiss(sysn.u)
        nm, dm = inverse_exact_modular(sysn.u)
        nf, df = inverse_exact_fraction(sysn.u)
        assert np.array_equal(nb.astype(object) * dm, nm.astype(object) * db), n
        assert np.array_equal(nf.astype(object) * dm, nm.astype(object) * df), n


def test_sweep_small():
    for n in range(1, 301):
        sysn = build_cardinal(n, TABLE)
        root = math.isqrt(n)
        assert 0 <= 2 * root - sysn.s <= 1
        assert verify_cardinal_identity(sysn), n
        assert mertens_via_cardinal(n, TABLE, system=sysn) == TABLE.mertens(n), n


def test_square_blocks_match_operator():
    for n_side in (2, 5, 11, 20, 50):
        sysn = build_cardinal(n_side * n_side, TABLE)
        a = build_operator("A", n_side).dense()
        assert np.array_equal(sysn.u[:n_side, :n_side], a), n_side


def test_singular_raises():
    singular = np.array([[1, 1], [1, 1]], dtype=np.int64)
    with pytest.raises(SingularMatrixError):
        inverse_exact_bareiss(singular)
    with pytest.raises(SingularMatrixError):
        inverse_exact_modular(singular)
    with pytest.raises(SingularMatrixError):
        inverse_exact_fraction(singular)


def test_non_integral_inverse_falls_back():
    # det = 2: inverse is half-integral, so the modular route must refuse
    m = np.array([[2, 0], [0, 1]], dtype=np.int64)
    with pytest.raises(ValueError):
        inverse_exact_modular(m)
    num, den = inverse_exact(m, "auto")
    assert den == 2
    assert num.tolist() == [[1, 0], [0, 2]]


def test_table_too_small():
    small = sieve_mobius(10)
    with pytest.raises(ValueError):
        build_cardinal(50, small)
