"""Reference values: L(z^3 - 3z + 5) = log 3 + g(1) + g(-1) with g from a
600-bit mpmath direct limit."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydyn.errors import NotBracketed
from polydyn.escape import green
from polydyn.lyapunov import _lyap_unicritical, lyap_ergodic, lyap_przytycki, lyap_spectral, unicritical_solve
from polydyn.poly import AffineMap, ComplexPoly, RationalPoly, chebyshev, conj_coeffs, conjugate_by, monomial

L_Z2_MINUS_6 = math.log(2) + 0.84946275269655038026


@pytest.mark.parametrize("d", range(2, 7))
def test_exceptional_maps(d):
    for f in (monomial(d), chebyshev(d), RationalPoly(tuple(-c for c in chebyshev(d).coeffs))):
        assert abs(lyap_przytycki(f).value - math.log(d)) < 1e-12


def test_przytycki_oracles():
    assert abs(lyap_przytycki(RationalPoly((1, 0, -6))).value - L_Z2_MINUS_6) < 1e-12
    assert abs(lyap_przytycki(RationalPoly((1, 0, -3, 5))).value - 2.0901330748611520729) < 1e-12


def test_complex_input_uses_numeric_critical_points():
    f = ComplexPoly((1, 0, -6))
    assert abs(lyap_przytycki(f).value - L_Z2_MINUS_6) < 1e-12


def test_affine_invariance():
    f = ComplexPoly((1.5 - 0.5j, 0.2, -3, 1j))
    g = conjugate_by(f, AffineMap(0.7 + 2j, -1.3))
    assert abs(lyap_przytycki(f).value - lyap_przytycki(g).value) < 1e-10


@given(st.complex_numbers(max_magnitude=8, allow_nan=False, allow_infinity=False))
@settings(max_examples=30, deadline=None)
def test_conjugate_polynomial_same_exponent(c):
    f = ComplexPoly((1, 0.5, c))
    assert abs(lyap_przytycki(f).value - lyap_przytycki(conj_coeffs(f)).value) < 1e-10


def test_spectral_exact_for_z2():
    est = lyap_spectral(RationalPoly((1, 0, 0)), 10)
    assert abs(est.value - math.log(2) * (1 - 2.0**-10)) < 1e-12
    assert est.metadata["spectrum_size"] == 2**10 + 1


def test_spectral_converges_for_z2_minus_6():
    est = lyap_spectral(RationalPoly((1, 0, -6)), 10)
    assert abs(est.value - L_Z2_MINUS_6) < 1e-6
    assert est.error_bound < 1e-5


def test_ergodic_deterministic_and_consistent():
    f = RationalPoly((1, 0, -6))
    a = lyap_ergodic(f, samples=20000, seed=3)
    b = lyap_ergodic(f, samples=20000, seed=3)
    assert a.value == b.value
    # burn-in leaves a small bias on top of the sampling error
    assert abs(a.value - L_Z2_MINUS_6) < 3 * a.std_error + 1e-3


def test_ergodic_exact_for_z2():
    est = lyap_ergodic(RationalPoly((1, 0, 0)), samples=5000, seed=0)
    assert abs(est.value - math.log(2)) < 1e-12


@pytest.mark.parametrize("d, L0", [(2, 0.75), (2, 2.0), (3, 2.0), (2, math.log(2) + 1e-3)])
def test_unicritical_solve(d, L0):
    c = unicritical_solve(d, L0)
    assert c > 0
    # recompute independently of the solver's own evaluation
    f = ComplexPoly((1,) + (0,) * (d - 1) + (c,))
    L = math.log(d) + (d - 1) * green(f, 0, tol=1e-14, precision_bits=200).value
    assert abs(L - L0) < 1e-8


def test_unicritical_not_bracketed():
    with pytest.raises(NotBracketed):
        unicritical_solve(2, math.log(2))
    with pytest.raises(NotBracketed):
        unicritical_solve(3, 0.5)


def test_unicritical_monotone_scan():
    cs = np.linspace(0.26, 5.0, 50)
    Ls = [_lyap_unicritical(2, c, 1e-12) for c in cs]
    assert np.all(np.diff(Ls) > 0)
