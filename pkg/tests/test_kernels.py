"""The compiled and the numpy kernels must agree."""

import numpy as np
import pytest

from polydyn import _core

COEFFS = np.array([1.0, 0.3 - 0.2j, -1.1, 0.5j], dtype=np.complex128)


def _circle(a, n):
    r = 1 + np.abs(a[1:] / a[0]).max()
    return r * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n)


def test_aberth_finds_roots(backend):
    z, res, it, step = backend.aberth_coeffs(COEFFS, _circle(COEFFS, 3), 200)
    ref = np.roots(COEFFS)
    assert res.max() < 1e-13
    for r in ref:
        assert np.abs(z - r).min() < 1e-12


def test_aberth_iterated_matches_expanded(backend):
    a = np.array([1.0, 0.0, -1.5 + 0.1j], dtype=np.complex128)
    n = 3
    expanded = a
    for _ in range(n - 1):
        acc = np.array([a[0]])
        for c in a[1:]:
            acc = np.convolve(acc, expanded)
            acc[-1] += c
        expanded = acc
    target = expanded.copy()
    target[-2] -= 1.0
    z, res, _, _ = backend.aberth_iterated(a, n, _circle(target, 8), 500, 1e100)
    assert res.max() < 1e-10
    assert np.abs(np.polyval(target, z)).max() < 1e-8


def test_escape_orbit_statuses(backend):
    a = np.array([1.0, 0.0, -6.0], dtype=np.complex128)
    status, step, z = backend.escape_orbit(a, 0j, 1e6, 1000, 0.0, 64)
    assert status == backend.ESCAPED and step == 5
    a = np.array([1.0, 0.0, -1.0], dtype=np.complex128)
    status, _, _ = backend.escape_orbit(a, 0j, 1e6, 1000, 1e-14, 64)
    assert status == backend.CYCLE


def test_backends_agree():
    if len(_core.BACKENDS) < 2:
        pytest.skip("compiled kernels not built")
    py, cy = _core.get_backend("python"), _core.get_backend("cython")
    rng = np.random.default_rng(0)
    a = rng.normal(size=9) + 1j * rng.normal(size=9)
    z0 = _circle(a, 8)
    zp = np.sort_complex(py.aberth_coeffs(a, z0, 300)[0])
    zc = np.sort_complex(cy.aberth_coeffs(a, z0, 300)[0])
    assert np.abs(zp - zc).max() < 1e-10
    starts = 3 * np.exp(2j * np.pi * rng.random(4))
    choices = rng.integers(0, 2, size=(4, 30))
    q = np.array([1.0, 0.0, -6.0], dtype=np.complex128)
    lp = py.backward_orbits(q, starts, choices)
    lc = cy.backward_orbits(q, starts, choices)
    assert np.allclose(lp, lc, atol=1e-9)
    for z in (0.1j, 0.3 + 0.2j, -1.9):
        assert py.escape_orbit(q, z, 1e6, 100, 0.0, 64)[:2] == cy.escape_orbit(q, z, 1e6, 100, 0.0, 64)[:2]


def test_preimages_batch(backend):
    a = np.array([1.0, 0.0, -6.0], dtype=np.complex128)
    w = np.array([1.0 + 1j, -3.0])
    pre = backend.preimages_batch(a, w)
    for row, t in zip(np.atleast_2d(pre), w):
        assert np.allclose(np.polyval(a, row), t, atol=1e-10)
