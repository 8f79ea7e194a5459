"""Escape radius, Green function, filled Julia set membership, connectivity.

The Green function is evaluated from a telescoped series. Once the orbit is
past ``R = max(B2, 1e6)`` at step ``n``,

    g(z) = d^-n [ log|z_n| + log|a_d|/(d-1) + sum_{k>=n} d^-(k-n+1) log|1+u_k| ]

with ``1 + u_k = f(z_k) / (a_d z_k^d)``. Every ``|u_k|`` is bounded by
``s_k = sum_{i<d} |a_i/a_d| |z_k|^(i-d)`` and the ``s_k`` decrease, so the
tail after the last computed term has an explicit geometric bound.
Orbit points that would overflow a double are carried as mpmath numbers,
which keeps the exponent range open without changing the working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from . import _core
from .poly import Poly, as_complex, critical_points

DEFAULT_TOL = 1e-12
DEFAULT_BUDGET = 10**4

_GREEN_RADIUS = 1e6
_EPS = 2.0**-53
_MAX_BITS = 4096
_BIG = 1e100
_MAX_TAIL = 200
_MAX_PERIOD = 64


@dataclass(frozen=True)
class EscapeRegion:
    """``|z| > radius`` implies ``|f(z)| > |z|``; ``|z| > growth_radius`` implies ``|f(z)| >= 2|z|``."""

    radius: float
    growth_radius: float


@dataclass(frozen=True)
class GreenValue:
    """Green function value with a rigorous truncation bound.

    ``escape_step`` is the first orbit index past the evaluation radius,
    or None when the orbit stayed bounded for the whole budget (value 0).
    """

    value: float
    error_bound: float
    escape_step: Optional[int]

    def to_dict(self):
        return {"value": self.value, "error_bound": self.error_bound, "escape_step": self.escape_step}


def escape_radius(f: Poly) -> EscapeRegion:
    """Explicit escape radii from the triangle inequality."""
    if f.degree < 2:
        raise ValueError("escape_radius needs degree >= 2")
    c = as_complex(f).coeffs
    lead = abs(c[0])
    rest = sum(abs(x) for x in c[1:])
    return EscapeRegion(max(1.0, (1.0 + rest) / lead), max(1.0, (2.0 + rest) / lead))


def _tail_terms(coeffs, z, n, tol):
    """Sum the telescoped series from an orbit point ``z = z_n`` with ``|z| > R``.

    Returns ``(value, error_bound)``.
    """
    d = len(coeffs) - 1
    ad = coeffs[0]
    b = [c / ad for c in coeffs[1:]]  # b[j-1] = a_{d-j}/a_d
    babs = [abs(x) for x in b]
    scale = d ** -float(n) if n < 1000 else math.exp(-n * math.log(d))
    logz = float(mpmath.log(abs(z))) if not isinstance(z, complex) else math.log(abs(z))
    total = logz + math.log(abs(ad)) / (d - 1)
    rem = math.inf
    weight = 1.0 / d
    for _ in range(_MAX_TAIL):
        big = isinstance(z, mpmath.mpc) or abs(z) > _BIG
        if big and not isinstance(z, mpmath.mpc):
            z = mpmath.mpc(z)
        w = 1 / z
        # u = sum_j b_j w^j via reverse Horner, s bounds |u|
        aw = abs(w)
        u = 0
        s = 0.0
        for j in range(d, 0, -1):
            u = (u + b[j - 1]) * w
            s = (s + babs[j - 1]) * float(aw)
        term = float(mpmath.log(abs(1 + u))) if big else math.log(abs(1 + u))
        total += weight * term
        rem = weight / (d - 1) * -math.log1p(-s) if s < 1 else math.inf
        if scale * rem <= 0.5 * tol or s == 0.0:
            break
        if s < 1e-300:
            # every further term is below double resolution
            break
        if not big and d * math.log(abs(z)) > 690.0:
            z = mpmath.mpc(z)
        z = z**d * ad * (1 + u)
        weight /= d
    value = scale * total
    err = scale * rem + 4.0 * np.finfo(float).eps * scale * (abs(logz) + abs(math.log(abs(ad))))
    return value, float(err)


def green(
    f: Poly,
    z,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
    precision_bits: Optional[int] = None,
) -> GreenValue:
    """Green function ``g_f(z) = lim d^-n log+|f^n(z)|``.

    Parameters
    ----------
    f : RationalPoly or ComplexPoly
    z : complex
    tol : float
        Target bound on the truncation error.
    budget : int
        Maximum number of iterations spent waiting for the orbit to escape.
        Bounded orbits give value 0 with ``escape_step=None``.
    precision_bits : int, optional
        Iterate in mpmath at this precision instead of double.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    fc = as_complex(f)
    d = fc.degree
    if d < 2:
        raise ValueError("green needs degree >= 2")
    R = max(escape_radius(fc).growth_radius, _GREEN_RADIUS)
    if precision_bits is not None and precision_bits > 53:
        return _green_mp(f, z, tol, budget, precision_bits, R)
    status, step, zn = _core.kernels.escape_orbit(fc.array, complex(z), R, budget, 0.0, _MAX_PERIOD)
    if status != _core.kernels.ESCAPED:
        return GreenValue(0.0, 0.0, None)
    if not (math.isfinite(zn.real) and math.isfinite(zn.imag)):
        # the last step overflowed: redo it with an open exponent range
        zn = _orbit_mp(fc.coeffs, complex(z), step)
    cond = _rounding_bound(fc.array, complex(z), int(step))
    if cond > 0.5 * tol:
        # cancellation in the expanded coefficients; redo with enough bits
        bits = min(53 + int(math.log2(cond / tol)) + 64, _MAX_BITS)
        return _green_mp(f, z, tol, budget, bits, R)
    value, err = _tail_terms(fc.coeffs, zn, step, tol)
    return GreenValue(max(value, 0.0), err + cond, int(step))


def _rounding_bound(a, z, step):
    """First-order estimate of the double-precision rounding error in ``g``.

    Horner at ``z_k`` loses ``d eps sum|a_i||z_k|^i / |f(z_k)|`` relative
    accuracy, which enters ``log|z_(k+1)|`` with weight ``d^-(k+1)``. Steps
    beyond the first 64 carry weight below ``2^-64`` and are ignored.
    """
    d = len(a) - 1
    aa = np.abs(a)
    total = 0.0
    weight = 1.0
    zk = z
    for _ in range(min(step, 64) + 1):
        if abs(zk) > _GREEN_RADIUS:
            # dominated by the leading term from here on
            break
        weight /= d
        fz = np.polyval(a, zk)
        if fz == 0:
            return math.inf
        total += weight * 2 * d * _EPS * np.polyval(aa, abs(zk)) / abs(fz)
        zk = fz
    return float(total)


def _orbit_mp(coeffs, z, n):
    z = mpmath.mpc(z)
    for _ in range(n):
        acc = mpmath.mpc(coeffs[0])
        for c in coeffs[1:]:
            acc = acc * z + c
        z = acc
    return z


def _green_mp(f, z, tol, budget, bits, R):
    with mpmath.workprec(bits):
        if hasattr(f.coeffs[0], "denominator"):
            coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in f.coeffs]
        else:
            coeffs = [mpmath.mpc(c) for c in f.coeffs]
        d = len(coeffs) - 1
        zk = mpmath.mpc(z)
        seen = {}
        step = None
        for k in range(budget + 1):
            if abs(zk) > R:
                step = k
                break
            key = (zk.real, zk.imag)
            if key in seen:
                return GreenValue(0.0, 0.0, None)
            seen[key] = k
            if len(seen) > 4 * _MAX_PERIOD:
                seen.clear()
            acc = coeffs[0]
            for c in coeffs[1:]:
                acc = acc * zk + c
            zk = acc
        if step is None:
            return GreenValue(0.0, 0.0, None)
        ad = coeffs[0]
        total = mpmath.log(abs(zk)) + mpmath.log(abs(ad)) / (d - 1)
        weight = mpmath.mpf(1) / d
        rem = mpmath.inf
        target = mpmath.mpf(tol) / 2 * mpmath.mpf(d) ** step
        for _ in range(_MAX_TAIL):
            acc = coeffs[0]
            for c in coeffs[1:]:
                acc = acc * zk + c
            ratio = acc / (ad * zk**d)
            s = sum(abs(c / ad) * abs(zk) ** (i - d) for i, c in zip(range(d - 1, -1, -1), coeffs[1:]))
            total += weight * mpmath.log(abs(ratio))
            rem = weight / (d - 1) * -mpmath.log(1 - s) if s < 1 else mpmath.inf
            if rem <= target:
                break
            zk = acc
            weight /= d
        scale = mpmath.mpf(d) ** (-step)
        return GreenValue(max(float(scale * total), 0.0), float(scale * rem), step)


@dataclass(frozen=True)
class Connectivity:
    """Three-valued connectivity verdict.

    ``status`` is ``"connected"`` (every critical orbit stayed bounded for the
    budget; not a proof), ``"disconnected"`` (a critical orbit passed the
    growth radius, which is a certificate) or ``"budget_exhausted"`` (an
    orbit was still between the two escape radii when the budget ran out).
    """

    status: str
    witness: Optional[complex] = None
    escape_step: Optional[int] = None
    budget: int = DEFAULT_BUDGET

    @property
    def certified(self) -> bool:
        return self.status == "disconnected"

    def to_dict(self):
        out = {"status": self.status, "certified": self.certified, "budget": self.budget}
        if self.witness is not None:
            out["witness"] = [self.witness.real, self.witness.imag]
            out["escape_step"] = self.escape_step
        return out


def julia_connectivity(f: Poly, budget: int = DEFAULT_BUDGET, tol: float = 1e-10) -> Connectivity:
    """Decide connectivity of J(f) from the critical orbits, up to ``budget`` steps."""
    fc = as_complex(f)
    if fc.degree < 2:
        raise ValueError("julia_connectivity needs degree >= 2")
    region = escape_radius(fc)
    a = fc.array
    k = _core.kernels
    pending = None
    for root in critical_points(fc, tol=tol):
        status, step, zn = k.escape_orbit(a, root.value, region.growth_radius, budget, 0.0, _MAX_PERIOD)
        if status == k.ESCAPED:
            return Connectivity("disconnected", root.value, int(step), budget)
        if status == k.BOUNDED and abs(zn) > region.radius and pending is None:
            pending = root.value
    if pending is not None:
        return Connectivity("budget_exhausted", pending, None, budget)
    return Connectivity("connected", None, None, budget)


@dataclass(frozen=True)
class Membership:
    """``inside`` is budget-limited; ``escape_step`` certifies escape via B2."""

    inside: bool
    escape_step: Optional[int]
    budget: int

    @property
    def certified(self) -> bool:
        return not self.inside


def in_filled_julia(f: Poly, z, budget: int = DEFAULT_BUDGET) -> Membership:
    """Test membership of ``z`` in the filled Julia set K(f)."""
    fc = as_complex(f)
    if fc.degree < 2:
        raise ValueError("in_filled_julia needs degree >= 2")
    k = _core.kernels
    B2 = escape_radius(fc).growth_radius
    status, step, _ = k.escape_orbit(fc.array, complex(z), B2, budget, 0.0, _MAX_PERIOD)
    if status == k.ESCAPED:
        return Membership(False, int(step), budget)
    return Membership(True, None, budget)
