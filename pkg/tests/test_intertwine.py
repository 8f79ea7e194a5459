import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydyn.errors import WitnessInvalid
from polydyn.intertwine import (
    IntertwiningWitness,
    check_semiconjugacy,
    chebyshev_witness,
    identity_witness,
    make_intertwined_pair,
    verify_rigidity_if_direction,
)
from polydyn.poly import ComplexPoly, RationalPoly, chebyshev, compose, conj_coeffs

Z = RationalPoly((1, 0))
Z2 = RationalPoly((1, 0, 0))


def test_examples():
    assert check_semiconjugacy(Z2, Z, Z2, 1)
    assert not check_semiconjugacy(RationalPoly((1, 0, 1)), RationalPoly((1, 5)), Z2, 1)


@pytest.mark.parametrize("d", range(1, 13))
def test_chebyshev_laurent_witness(d):
    h, R = chebyshev_witness(d)
    assert check_semiconjugacy(chebyshev(d), h, R, 1)


def test_iterate_witness():
    # f^2 o z = z o f^2
    f = RationalPoly((1, 0, -6))
    assert check_semiconjugacy(f, Z, compose(f, f), 2)


def test_pair_examples():
    f, g, _ = make_intertwined_pair(RationalPoly((1, 1)), Z2)
    assert f.coeffs == (1, 0, 1) and g.coeffs == (1, 2, 1)
    f, g, _ = make_intertwined_pair(Z2, Z2)
    assert f.coeffs == g.coeffs == (1, 0, 0, 0, 0)
    f, g, _ = make_intertwined_pair(RationalPoly((1, 0, 1)), RationalPoly((1, 0, 0, -2)))
    # expanded by hand: (z^3 - 2)^2 + 1 and (z^2 + 1)^3 - 2
    assert f.coeffs == (1, 0, 0, -4, 0, 0, 5)
    assert g.coeffs == (1, 0, 3, 0, 3, 0, -1)


coeff = st.integers(-6, 6)


def int_poly(d):
    return st.lists(coeff, min_size=d + 1, max_size=d + 1).filter(lambda c: c[0] != 0).map(lambda c: RationalPoly(tuple(c)))


pairs = st.tuples(st.integers(1, 4), st.integers(1, 4)).filter(lambda t: t[0] * t[1] >= 2 and sum(t) <= 8).flatmap(
    lambda t: st.tuples(int_poly(t[0]), int_poly(t[1]))
)


@given(pairs)
@settings(max_examples=40, deadline=None)
def test_witness_soundness(hk):
    h, k = hk
    f, g, w = make_intertwined_pair(h, k)
    assert f.degree == g.degree
    assert check_semiconjugacy(f, w.h1, w.R, w.n) and check_semiconjugacy(g, w.h2, w.R, w.n)


def test_complex_witness_tolerance():
    h = ComplexPoly((1, 0.3j, 1))
    k = ComplexPoly((2 - 1j, 0, 0.5))
    f, g, w = make_intertwined_pair(h, k)
    assert w.validates(f, g)


def test_rigidity_examples():
    f = RationalPoly((1, 0, -6))
    assert verify_rigidity_if_direction(f, f, identity_witness(f)).lyapunov_gap == 0.0
    f, g, w = make_intertwined_pair(RationalPoly((1, 0, -3)), RationalPoly((1, 0, -5)))
    assert verify_rigidity_if_direction(f, g, w).lyapunov_gap < 1e-7
    f = ComplexPoly((1, 0, 6 + 1j))
    rep = verify_rigidity_if_direction(f, conj_coeffs(f), identity_witness(f), conjugate=True)
    assert rep.lyapunov_gap < 1e-7 and rep.passed


def test_rigidity_heights_on_rational_critical_points():
    f, g, w = make_intertwined_pair(RationalPoly((1, 0, -4)), RationalPoly((1, 0, -1)))
    rep = verify_rigidity_if_direction(f, g, w)
    assert rep.height_gap is not None and rep.height_gap < 1e-6


def test_invalid_witness():
    f = RationalPoly((1, 0, -6))
    g = RationalPoly((1, 0, -5))
    with pytest.raises(WitnessInvalid):
        verify_rigidity_if_direction(f, g, identity_witness(f))


def test_witness_json_roundtrip():
    _, _, w = make_intertwined_pair(RationalPoly((1, 0, 1)), RationalPoly((2, -1)))
    text = w.to_json()
    assert set(json.loads(text)) == {"h1", "h2", "R", "n"}
    back = IntertwiningWitness.from_json(text)
    assert back == w


def test_witness_rejects_constants():
    with pytest.raises(ValueError):
        IntertwiningWitness(RationalPoly((3,)), Z, Z2, 1)
