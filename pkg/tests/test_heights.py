"""Height oracles: closed forms for z^2 and the exact direct limit
``d^-n h(f^n(a))`` in Fractions, which for z^2 + 2 at 0 and n = 12 is
within 2^-12 * 10 of the limit."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydyn.errors import BudgetExhausted, IrrationalCriticalPoints
from polydyn.heights import (
    canonical_height,
    critical_height,
    direct_limit,
    is_preperiodic,
    local_height,
    relevant_primes,
    valuation,
    weil_height,
)
from polydyn.poly import AffineMap, RationalPoly, chebyshev, conjugate_by, evaluate

Z2 = RationalPoly((1, 0, 0))


def test_weil_height_and_valuation():
    assert weil_height(Fraction(-9, 4)) == math.log(9)
    assert weil_height(0) == 0.0
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(Fraction(12, 5), 5) == -1


def test_monomial_heights():
    assert canonical_height(Z2, 3).global_ == math.log(3)
    r = canonical_height(Z2, Fraction(1, 2))
    assert abs(r.global_ - math.log(2)) < 1e-15
    assert r.multiplicative == pytest.approx(2)
    places = {loc.place: loc for loc in r.locals}
    assert places["inf"].value == 0.0 and places[2].certified


def test_preperiodic_point_has_certificate():
    f = RationalPoly((1, 0, -1))
    r = canonical_height(f, 0)
    assert r.global_ == 0.0 and r.preperiodic
    pp = is_preperiodic(f, 0)
    assert pp and (pp.tail, pp.period) == (0, 2)
    assert is_preperiodic(f, -1).period == 2


def test_escape_certificates():
    assert not is_preperiodic(Z2, 2)
    assert is_preperiodic(Z2, Fraction(1, 3)).place == 3
    assert is_preperiodic(RationalPoly((1, 0, -2)), Fraction(1, 3)).place == 3


def test_p_adic_closed_form():
    # z^2 + 1/3 at 1: v_3 goes 0, -1, -2, -4, ... so lambda_3 = log(3)/2
    f = RationalPoly((1, 0, Fraction(1, 3)))
    loc = local_height(f, 1, 3)
    assert loc.certified and abs(loc.value - math.log(3) / 2) < 1e-15


def test_bounded_p_adic_disc_gives_zero():
    # z^2 + z/2 maps {|z|_2 <= 2} into itself, so lambda_2 = 0 there
    f = RationalPoly((1, Fraction(1, 2), 0))
    loc = local_height(f, Fraction(4, 3), 2)
    assert loc.value == 0.0 and loc.error_bound < 1e-50


def test_relevant_primes():
    assert relevant_primes(RationalPoly((3, Fraction(1, 10), 0)), Fraction(1, 7)) == [2, 3, 5, 7]


def test_direct_limit_oracle():
    f = RationalPoly((1, 0, 2))
    h = canonical_height(f, 0).global_
    assert abs(h - direct_limit(f, 0, 12)) < 10 * 2.0**-12
    assert abs(h - 0.45478480506111780378) < 1e-12


def rational_map():
    fr = st.fractions(min_value=-3, max_value=3, max_denominator=4)
    return st.tuples(
        st.integers(2, 3),
        st.fractions(min_value=Fraction(1, 3), max_value=3, max_denominator=3),
        st.lists(fr, min_size=3, max_size=3),
    ).map(lambda t: RationalPoly((t[1], *t[2][: t[0]])))


@given(rational_map(), st.fractions(min_value=-5, max_value=5, max_denominator=5))
@settings(max_examples=50, deadline=None)
def test_functional_equation(f, a):
    h0 = canonical_height(f, a).global_
    h1 = canonical_height(f, evaluate(f, a)).global_
    assert abs(h1 - f.degree * h0) < 1e-9 * (1 + h1)


@given(rational_map(), st.fractions(min_value=-5, max_value=5, max_denominator=5))
@settings(max_examples=30, deadline=None)
def test_height_vanishes_iff_preperiodic(f, a):
    try:
        pp = is_preperiodic(f, a)
    except BudgetExhausted:
        return
    h = canonical_height(f, a).global_
    assert (h == 0.0) == pp.preperiodic or (not pp.preperiodic and h > 0)
    if pp.preperiodic:
        assert h == 0.0
    else:
        assert h > 0


@pytest.mark.parametrize("d", range(2, 9))
def test_pcf_critical_height_zero(d):
    for f in (chebyshev(d), RationalPoly(tuple(-c for c in chebyshev(d).coeffs))):
        r = critical_height(f)
        assert r.value == 0.0 and r.certified_zero


def test_critical_height_quadratics():
    for c in (0, -1, -2):
        assert critical_height(RationalPoly((1, 0, c))).value == 0.0
    r = critical_height(RationalPoly((1, 0, 2)))
    assert abs(r.value - direct_limit(RationalPoly((1, 0, 2)), 0, 8)) < 10 * 2.0**-8


def test_critical_height_counts_multiplicity():
    # z^3 + 2 has the double critical point 0
    f = RationalPoly((1, 0, 0, 2))
    r = critical_height(f)
    assert r.value == pytest.approx(2 * canonical_height(f, 0).global_, abs=1e-15)


def test_critical_height_conjugation_invariant():
    f = RationalPoly((1, -3, 1, 4))  # critical points 1 +- sqrt(6)/3 are irrational
    with pytest.raises(IrrationalCriticalPoints):
        critical_height(f)
    g = RationalPoly((1, 0, -3, 1))  # critical points +-1
    h = conjugate_by(g, AffineMap(Fraction(2), Fraction(1, 3)))
    assert abs(critical_height(g).value - critical_height(h).value) < 1e-12


def test_report_serialisation():
    d = canonical_height(Z2, Fraction(1, 2)).to_dict()
    assert set(d) >= {"global", "multiplicative", "locals", "error_bound"}
    assert critical_height(RationalPoly((1, 0, 2))).to_dict()["per_critical_point"][0]["point"] == "0"
