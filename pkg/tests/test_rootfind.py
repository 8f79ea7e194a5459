import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydyn.errors import DegreeBudgetExceeded, IllConditionedWarning
from polydyn.poly import ComplexPoly, RationalPoly
from polydyn.rootfind import all_roots, periodic_roots, preimages


def test_multiple_roots_are_clustered():
    # (z - 1)^3 (z + 2)
    rs = all_roots(RationalPoly((1, -1, -3, 5, -2)))
    got = sorted((round(r.value.real, 9), r.multiplicity) for r in rs)
    assert got == [(-2.0, 1), (1.0, 3)]
    assert rs.degree_accounted == 4


def test_complex_triple_root():
    p = ComplexPoly((1, -3j, -3, 1j))  # (z - i)^3
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedWarning)
        rs = all_roots(p)
    assert len(rs) == 1
    assert rs.roots[0].multiplicity == 3
    assert abs(rs.roots[0].value - 1j) < 1e-10


def test_zero_roots_stripped_exactly():
    rs = all_roots(RationalPoly((1, 0, -4, 0, 0)))
    values = sorted(rs.values().real)
    assert values[1:3] == [0.0, 0.0]
    assert abs(values[0] + 2) < 1e-14 and abs(values[3] - 2) < 1e-14


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=2, max_size=12))
@settings(max_examples=40, deadline=None)
def test_vieta(roots):
    coeffs = np.poly(np.array(roots))
    if abs(coeffs[0]) == 0:
        return
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedWarning)
        rs = all_roots(ComplexPoly(tuple(coeffs)), tol=1e-6)
    z = rs.values()
    assert len(z) == len(roots)
    back = np.poly(z)
    scale = np.abs(coeffs).max()
    assert np.abs(back - coeffs).max() <= 1e-6 * scale


def test_high_degree_random():
    rng = np.random.default_rng(1)
    a = rng.normal(size=257) + 1j * rng.normal(size=257)
    rs = all_roots(ComplexPoly(tuple(a)))
    assert rs.degree_accounted == 256
    assert rs.max_residual < 1e-10


def test_extended_precision_path():
    rs = all_roots(RationalPoly((1, 0, -2)), precision_bits=200)
    assert sorted(abs(v.real) for v in rs.values()) == pytest.approx([2**0.5, 2**0.5], abs=1e-15)


def test_preimages():
    f = RationalPoly((1, 0, -6))
    pre = preimages(f, 3)
    assert sorted(pre.values().real) == pytest.approx([-3.0, 3.0])


@pytest.mark.parametrize("c, n", [(-6, 1), (-6, 4), (0.3 + 0.5j, 5), (-1, 3)])
def test_periodic_roots_solve_the_iterate(c, n):
    f = ComplexPoly((1, 0, c))
    rs = periodic_roots(f, n)
    assert rs.degree_accounted == 2**n
    z = rs.values()
    fn = z.copy()
    for _ in range(n):
        fn = fn * fn + c
    assert np.abs(fn - z).max() < 1e-8 * (1 + np.abs(z).max())


def test_periodic_roots_budget():
    with pytest.raises(DegreeBudgetExceeded):
        periodic_roots(RationalPoly((1, 0, -6)), 20, budget=2**14)


def test_parabolic_fixed_point_double():
    rs = periodic_roots(RationalPoly((1, 0, Fraction(1, 4))), 1)
    assert len(rs) == 1 and rs.roots[0].multiplicity == 2
    assert abs(rs.roots[0].value - 0.5) < 1e-8
