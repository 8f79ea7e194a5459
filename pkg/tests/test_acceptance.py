"""The eleven acceptance rows at their stated tolerances.

Each test prints its ``[PASS]``/``[FAIL]`` line; the lines are also collected
and repeated in the terminal summary (see ``conftest.py``) so they survive
pytest's output capture.

Row 10 cannot pass as stated: at c = 0.257576 the Julia set is a Cantor set
but ``L - log 2 = g(0)`` is about 5e-11, under the 1e-9 margin. The row runs
unchanged and is marked as an expected, strict failure.
"""

import math

import pytest

from polydyn import experiments
from polydyn.escape import green
from polydyn.poly import ComplexPoly

ACCEPTANCE_LINES = []

ROW10_REASON = (
    "c = 0.257576 is disconnected with L - log 2 = g_c(0) ~ 5e-11 < 1e-9; "
    "the row is unattainable as stated, see the decisions ledger"
)


def _check(cid):
    row = experiments.CRITERIA[cid - 1]()
    line = row.line()
    ACCEPTANCE_LINES.append((cid, line))
    print(line)
    assert row.passed, line


@pytest.mark.parametrize("cid", [1, 2, 3, 4, 5, 6, 7, 8, 9, 11])
def test_criterion(cid):
    _check(cid)


@pytest.mark.xfail(strict=True, reason=ROW10_REASON)
def test_criterion_10():
    _check(10)


def test_criterion_10_failure_is_the_parabolic_margin():
    """The only disagreement is a disconnected map whose gap is below the margin."""
    c = 0.257576
    f = ComplexPoly((1.0, 0.0, c))
    g0 = green(f, 0.0, tol=1e-14).value
    assert 0 < g0 < 1e-9
    assert abs(g0 - 5.1e-11) < 0.2e-11
    assert experiments.lyap_przytycki(f).value - math.log(2) == pytest.approx(g0, abs=1e-13)
