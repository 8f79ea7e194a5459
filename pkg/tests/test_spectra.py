import math

import numpy as np
import pytest

from polydyn.errors import NotPeriodic
from polydyn.poly import AffineMap, ComplexPoly, RationalPoly, conjugate_by
from polydyn.spectra import minimal_period, multiplier, multiset_distance, spectrum


def test_small_spectra_of_z2():
    assert multiset_distance(spectrum(RationalPoly((1, 0, 0)), 1).multipliers, [0, 2, 0], relative=False) < 1e-12
    assert multiset_distance(spectrum(RationalPoly((1, 0, 0)), 2).multipliers, [0, 4, 4, 4, 0], relative=False) < 1e-12


@pytest.mark.parametrize("n", range(1, 11))
def test_cardinality(n):
    assert len(spectrum(RationalPoly((1, 0, 0)), n)) == 2**n + 1


def test_fixed_point_multipliers_closed_form():
    # fixed points of z^2 + c solve z^2 - z + c = 0 and have multiplier 2z
    c = 0.3 + 0.4j
    fixed = np.roots([1, -1, c])
    got = spectrum(ComplexPoly((1, 0, c)), 1).multipliers
    assert multiset_distance(got, list(2 * fixed) + [0], relative=False) < 1e-13


def test_period_counts_for_z2_minus_6():
    level = spectrum(RationalPoly((1, 0, -6)), 6)
    # points of exact period m: sum over divisors, Moebius inversion of 2^n
    assert level.exact_periods == {1: 2, 2: 2, 3: 6, 6: 54}


def test_conjugation_invariance():
    f = ComplexPoly((1, 0.5j, -2))
    g = conjugate_by(f, AffineMap(2 - 1j, 0.3))
    for n in (1, 2, 3):
        assert multiset_distance(spectrum(f, n).multipliers, spectrum(g, n).multipliers) < 1e-9


def test_multiplier_and_not_periodic():
    f = RationalPoly((1, 0, -6))
    assert multiplier(f, 3, 1) == pytest.approx(6)
    assert multiplier(f, -2, 1) == pytest.approx(-4)
    with pytest.raises(NotPeriodic):
        multiplier(f, 0.5, 1)


def test_minimal_period():
    f = RationalPoly((1, 0, -1))
    assert minimal_period(f, 0, 2) == 2
    assert minimal_period(f, (1 + math.sqrt(5)) / 2, 4) == 1


def test_serialisation():
    level = spectrum(RationalPoly((1, 0, 0)), 2)
    d = level.to_dict()
    assert d["n"] == 2 and len(d["multipliers"]) == 5
    csv = level.to_csv().splitlines()
    assert csv[0] == "index,length,period" and len(csv) == 6
    assert "np." not in level.to_csv()


def test_multiset_distance_shape_mismatch():
    assert multiset_distance([1, 2], [1]) == math.inf
