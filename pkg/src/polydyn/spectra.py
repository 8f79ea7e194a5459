"""Periodic points, multipliers and the multiplier/length spectra.

``S_n(f)`` is taken as the multiset of ``(f^n)'(z)`` over every fixed point
of ``f^n`` (points of exact period ``m | n`` included), repeated by
multiplicity, together with the value 0 contributed by the superattracting
fixed point at infinity. Its cardinality is therefore ``d^n + 1``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import NotPeriodic
from .poly import Poly, as_complex
from .rootfind import DEFAULT_ROOT_BUDGET, RootSet, periodic_roots

PERIOD_TOL = 1e-8
# minimal-period classification of computed roots; periodic points of high
# period can shadow a lower-period cycle to within 1e-9, so PERIOD_TOL is
# too coarse to tell them apart
CLASSIFY_TOL = 1e-12


def periodic_points(f: Poly, n: int, tol: float = 1e-10, budget: int = DEFAULT_ROOT_BUDGET) -> RootSet:
    """All ``d^n`` solutions of ``f^n(z) = z`` with multiplicity."""
    return periodic_roots(f, n, tol=tol, budget=budget)


def _orbit_derivative(coeffs, z0, n):
    """Return ``(f^n(z0), (f^n)'(z0))`` by the chain rule; ``z0`` may be an array."""
    da = np.polyder(coeffs)
    z = np.asarray(z0, dtype=np.complex128)
    der = np.ones_like(z)
    for _ in range(n):
        der = der * np.polyval(da, z)
        z = np.polyval(coeffs, z)
    return z, der


def _is_fixed(zn, z0, der, tol):
    """``z0`` is a fixed point of the iterate up to rounding.

    Accept a small displacement, or a small Newton step ``|F - z| / |F' - 1|``:
    at a repelling point of high period the displacement is amplified by the
    multiplier while the Newton step still measures the distance to the root.
    """
    gap = np.abs(zn - z0)
    scale = tol * (1.0 + np.abs(z0))
    den = np.abs(der - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        newton = np.where(den > 0, gap / den, np.inf)
    return (gap <= scale) | (newton <= scale)


def multiplier(f: Poly, z0, n: int, tol: float = PERIOD_TOL) -> complex:
    """Multiplier ``(f^n)'(z0)`` via the chain rule along the orbit.

    Raises
    ------
    NotPeriodic
        ``z0`` is not a fixed point of ``f^n`` within ``tol`` (relative).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = as_complex(f).array
    z0 = complex(z0)
    zn, der = _orbit_derivative(a, z0, n)
    if not _is_fixed(zn, z0, der, tol):
        raise NotPeriodic(f"|f^{n}(z0) - z0| = {abs(complex(zn) - z0):.3g}")
    return complex(der)


def minimal_period(f: Poly, z0, n: int, tol: float = CLASSIFY_TOL):
    """Least ``m | n`` with ``z0`` fixed by ``f^m`` within ``tol``.

    ``z0`` may be an array, in which case an integer array is returned.
    """
    a = as_complex(f).array
    z0 = np.asarray(z0, dtype=np.complex128)
    out = np.full(z0.shape, n, dtype=np.int64)
    open_ = np.ones(z0.shape, dtype=bool)
    for m in range(1, n):
        if n % m:
            continue
        zm, der = _orbit_derivative(a, z0, m)
        hit = open_ & _is_fixed(zm, z0, der, tol)
        out[hit] = m
        open_ &= ~hit
    return int(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SpectrumLevel:
    """The multiset ``S_n`` and its lengths.

    ``multipliers`` lists the finite fixed points of ``f^n`` in root order
    (each repeated by multiplicity) followed by the 0 for infinity.
    ``points`` holds the matching fixed points, with None for infinity.
    ``exact_periods`` maps a minimal period to the number of finite points
    (with multiplicity) having it. ``flagged`` lists multiple roots
    (parabolic or near-parabolic collisions), which are reported rather
    than resolved. ``periods`` gives the minimal period of each finite entry.
    """

    n: int
    degree: int
    multipliers: tuple
    points: tuple
    exact_periods: dict
    flagged: tuple = ()
    periods: tuple = ()

    @property
    def lengths(self) -> np.ndarray:
        return np.abs(np.array(self.multipliers, dtype=np.complex128))

    def __len__(self):
        return len(self.multipliers)

    def to_dict(self):
        return {
            "n": self.n,
            "multipliers": [[complex(m).real, complex(m).imag] for m in self.multipliers],
            "lengths": [float(x) for x in self.lengths],
            "exact_periods": {str(k): v for k, v in sorted(self.exact_periods.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        """Lengths as plot-ready CSV: ``index,length,period``."""
        buf = io.StringIO()
        buf.write("index,length,period\n")
        periods = list(self.periods) + [1]
        for i, (x, p) in enumerate(zip(self.lengths, periods)):
            buf.write(f"{i},{float(x)!r},{p}\n")
        return buf.getvalue()


def spectrum(f: Poly, n: int, tol: float = 1e-10, budget: int = DEFAULT_ROOT_BUDGET) -> SpectrumLevel:
    """Assemble ``S_n(f)`` from the fixed points of ``f^n``."""
    fc = as_complex(f)
    d = fc.degree
    roots = periodic_points(fc, n, tol=tol, budget=budget)
    a = fc.array
    vals = roots.values(with_multiplicity=False)
    _, ders = _orbit_derivative(a, vals, n)
    mins = minimal_period(fc, vals, n)
    mults, pts, periods = [], [], []
    counts = {}
    flagged = []
    for r, der, m in zip(roots, ders, mins):
        m = int(m)
        counts[m] = counts.get(m, 0) + r.multiplicity
        if r.multiplicity > 1:
            flagged.append(r.value)
        for _ in range(r.multiplicity):
            mults.append(complex(der))
            pts.append(r.value)
            periods.append(m)
    mults.append(0j)
    pts.append(None)
    return SpectrumLevel(n, d, tuple(mults), tuple(pts), counts, tuple(flagged), tuple(periods))


def multiset_distance(x, y, relative: bool = True) -> float:
    """Largest pair gap under the optimal matching of two equal-size multisets.

    Uses the assignment solver from scipy on the (relative) distance matrix.
    """
    from scipy.optimize import linear_sum_assignment

    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if x.shape != y.shape:
        return float("inf")
    if x.size == 0:
        return 0.0
    cost = np.abs(x[:, None] - y[None, :])
    if relative:
        cost = cost / np.maximum(1.0, np.maximum(np.abs(x)[:, None], np.abs(y)[None, :]))
    i, j = linear_sum_assignment(cost)
    return float(cost[i, j].max())
