"""Green function oracles come from an independent 600-bit mpmath direct
limit ``d^-60 log|f^60(z)|``."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydyn.escape import escape_radius, green, in_filled_julia, julia_connectivity
from polydyn.poly import ComplexPoly, RationalPoly, chebyshev, compose

ORACLES = [
    ((1, 0, -6), 0, 0.84946275269655038026),
    ((1, 0, 1j), 1 + 1j, 0.55050992951784516542),
    ((1, 0, -3, 5), 1, 0.34819291214491832806),
    ((1, 0, -3, 5), -1, 0.64332787404812405349),
    ((2, 0, -1), 3, 1.7627471740390860499),
    ((1, 0, 1), 0, 0.20367726136974000144),
]


@pytest.mark.parametrize("coeffs, z, expected", ORACLES)
def test_green_oracles(coeffs, z, expected):
    g = green(ComplexPoly(coeffs), z, tol=1e-13)
    assert abs(g.value - expected) < 1e-12
    assert g.error_bound < 1e-12


def test_green_extended_precision_agrees():
    f = RationalPoly((1, 0, -6))
    assert abs(green(f, 0, precision_bits=200).value - 0.84946275269655038026) < 1e-15


def test_green_vanishes_on_filled_julia_set():
    assert green(RationalPoly((1, 0, -1)), 0).value == 0.0
    assert green(chebyshev(2), 1.5).value == 0.0


def test_green_far_away_is_log():
    f = RationalPoly((1, 0, -6))
    z = 1e200
    assert green(f, z).value == pytest.approx(math.log(z), rel=1e-15)


def test_green_cancellation_is_detected():
    # expanded composite h o k with heavy cancellation near a critical point
    f = compose(RationalPoly((5, 6, 3, 1, -4)), RationalPoly((-1, -5, -6, -4, 1)))
    z = -3.7002362640826973
    assert abs(green(f, z).value - green(f, z, precision_bits=300).value) < 1e-12


@given(
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
)
@settings(max_examples=60, deadline=None)
def test_green_functional_equation(c, z):
    f = ComplexPoly((1, 0, c))
    g0 = green(f, z).value
    g1 = green(f, z * z + c).value
    assert abs(g1 - 2 * g0) < 1e-9 * (1 + g1)


def test_escape_radius():
    r = escape_radius(RationalPoly((1, 0, -6)))
    assert r.radius == 7 and r.growth_radius == 8


def test_connectivity():
    assert julia_connectivity(RationalPoly((1, 0, -1))).status == "connected"
    dis = julia_connectivity(RationalPoly((1, 0, 1)))
    assert dis.status == "disconnected" and dis.certified and dis.witness == 0
    # parabolic: bounded but slow, still connected within the budget
    assert julia_connectivity(ComplexPoly((1, 0, 0.25))).status in ("connected", "budget_exhausted")


def test_membership():
    f = RationalPoly((1, 0, -6))
    assert not in_filled_julia(f, 0).inside
    assert in_filled_julia(f, 3).inside  # repelling fixed point
