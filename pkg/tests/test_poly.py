from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydyn.errors import DegreeBudgetExceeded
from polydyn.poly import (
    AffineMap,
    ComplexPoly,
    LaurentPoly,
    RationalPoly,
    chebyshev,
    compose,
    compose_laurent,
    conjugate_by,
    evaluate,
    iterate,
    monic_centered,
    principal_root,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def rpoly(min_deg=1, max_deg=4):
    return st.lists(small, min_size=min_deg + 1, max_size=max_deg + 1).filter(lambda c: c[0] != 0).map(
        lambda c: RationalPoly(tuple(c))
    )


def test_coefficients_are_normalised():
    p = RationalPoly((0, 0, 1, 0, -6))
    assert p.coeffs == (1, 0, -6)
    assert p.degree == 2
    assert isinstance(p.coeffs[0], Fraction)


def test_zero_leading_rejected():
    with pytest.raises(ValueError):
        RationalPoly((0,))


def test_compose_and_iterate():
    f = RationalPoly((1, 0, -1))
    assert compose(f, f).coeffs == (1, 0, -2, 0, 0)
    assert iterate(f, 3).degree == 8
    with pytest.raises(DegreeBudgetExceeded):
        iterate(f, 30, budget=2**20)


@given(rpoly(), rpoly(), small)
@settings(max_examples=50, deadline=None)
def test_compose_evaluates_pointwise(p, q, x):
    assert evaluate(compose(p, q), x) == evaluate(p, evaluate(q, x))


@given(rpoly(2, 4), st.fractions(min_value=-3, max_value=3, max_denominator=5).filter(lambda a: a != 0), small)
@settings(max_examples=40, deadline=None)
def test_conjugation_roundtrip(p, alpha, beta):
    A = AffineMap(alpha, beta)
    q = conjugate_by(p, A)
    back = conjugate_by(q, A.inverse())
    assert back.coeffs == p.coeffs


def test_monic_centered_normal_form():
    p = ComplexPoly((2 + 1j, 3, -1, 4))
    q, A = monic_centered(p)
    assert abs(q.coeffs[0] - 1) < 1e-12
    assert abs(q.coeffs[1]) < 1e-12
    # q = A p A^-1 up to rounding
    r = conjugate_by(p, A)
    assert np.allclose(np.array(r.coeffs, dtype=complex), np.array(q.coeffs, dtype=complex), atol=1e-12)


def test_principal_root_exact_for_rationals():
    assert principal_root(Fraction(4), 2) == 2
    assert abs(principal_root(-8, 3) - (1 + 1.7320508075688772j)) < 1e-15


@pytest.mark.parametrize("d", range(1, 13))
def test_chebyshev_laurent_identity(d):
    h = LaurentPoly({1: 1, -1: 1})
    assert compose_laurent(chebyshev(d), h) == LaurentPoly({d: 1, -d: 1})


def test_chebyshev_small_degrees():
    assert chebyshev(2).coeffs == (1, 0, -2)
    assert chebyshev(3).coeffs == (1, 0, -3, 0)
