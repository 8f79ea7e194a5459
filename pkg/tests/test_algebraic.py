from fractions import Fraction

import pytest

from polydyn.algebraic import critical_classes, escapes_numerically, factor_rational, is_pcf, orbit_in_field
from polydyn.poly import RationalPoly, chebyshev


def test_factoring():
    facs = factor_rational((3, 0, -3))  # 3(z - 1)(z + 1)
    assert sorted(f for f, _ in facs) == [(1, -1), (1, 1)]


@pytest.mark.parametrize("d", range(2, 9))
def test_chebyshev_is_pcf(d):
    assert is_pcf(chebyshev(d)) is True
    assert is_pcf(RationalPoly(tuple(-c for c in chebyshev(d).coeffs))) is True


def test_basilica_cycle():
    (cls,) = critical_classes(RationalPoly((1, 0, -1)))
    assert cls.rational_point == 0 and cls.tail == 0 and cls.period == 2


def test_cos_normalised_chebyshev():
    assert is_pcf(RationalPoly((4, 0, -3, 0))) is True


def test_irrational_pcf_class():
    # critical points +-1/sqrt(2) swap: g(1/sqrt 2) = -1/sqrt 2
    g = RationalPoly((1, 0, Fraction(-3, 2), 0))
    (cls,) = critical_classes(g)
    assert cls.degree == 2 and cls.count == 2
    assert cls.preperiodic and cls.tail == 0 and cls.period == 2


def test_escaping_class_is_settled_numerically():
    f = RationalPoly((1, 0, 2))
    assert escapes_numerically(f, (1, 0))
    assert is_pcf(f) is False


def test_orbit_in_field_undecided():
    tail, period, steps = orbit_in_field(RationalPoly((1, 0, Fraction(-3, 4) + Fraction(1, 7))), (1, 0), max_steps=5)
    assert tail is None and steps == 5
