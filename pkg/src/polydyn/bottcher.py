"""Böttcher coordinate at infinity.

Two independent routes are provided. :func:`bottcher_series` solves the
functional equation ``phi(f(z)) = phi(z)^d`` for the Laurent coefficients
of ``phi(z) = b1 z + b0 + b_-1 / z + ...``; :func:`bottcher_eval` evaluates
``phi`` pointwise from the convergent product over the orbit.

The leading coefficient satisfies ``b1^(d-1) = a_d``; we take the principal
root. Writing ``phi(z) = b1 z (1 + C(1/z))`` and ``f(z) = a_d z^d (1 + u(1/z))``
the equation becomes the power-series identity

    (1 + u(t)) (1 + C(T(t))) = (1 + C(t))^d,   T = t^d / (a_d (1 + u(t))),

whose coefficient of ``t^j`` is ``d c_j`` plus terms in lower ``c_i``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutsideDomain, RelationViolated
from .escape import escape_radius
from .poly import Poly, as_complex, conj_coeffs, monic_centered, principal_root

DEFAULT_ORDER = 20
ZETA_TOL = 1e-10


def _mul(p, q, M):
    return np.convolve(p, q)[:M]


def _pow(p, k, M):
    out = np.zeros(M, dtype=np.complex128)
    out[0] = 1.0
    for _ in range(k):
        out = _mul(out, p, M)
    return out


def _inv(p, M):
    """Power-series reciprocal, p[0] != 0."""
    out = np.zeros(M, dtype=np.complex128)
    out[0] = 1.0 / p[0]
    for j in range(1, M):
        out[j] = -np.dot(p[1 : j + 1], out[j - 1 :: -1][:j]) / p[0]
    return out


def _compose(C, T, M):
    """C(T(t)) truncated, with C[0] = 0 and T = O(t)."""
    out = np.zeros(M, dtype=np.complex128)
    Tk = np.zeros(M, dtype=np.complex128)
    Tk[0] = 1.0
    for k in range(1, M):
        Tk = _mul(Tk, T, M)
        if not Tk.any():
            break
        out += C[k] * Tk
    return out


def _identity_parts(a, d, M):
    """Series 1 + u and T for the normalised functional equation."""
    ad = a[0]
    one_u = np.zeros(M, dtype=np.complex128)
    for i in range(min(d, M - 1) + 1):
        one_u[i] = a[i] / ad
    T = np.zeros(M, dtype=np.complex128)
    inv = _inv(one_u, M)
    T[d:] = inv[: M - d] / ad
    return one_u, T


def _residual(C, one_u, T, d, M):
    lhs = _mul(one_u, np.concatenate([[1.0], np.zeros(M - 1)]) + _compose(C, T, M), M)
    one_c = C.copy()
    one_c[0] = 1.0
    return lhs - _pow(one_c, d, M)


@dataclass(frozen=True)
class BottcherSeries:
    """Truncated Laurent expansion ``b1 z + b0 + b_-1 z^-1 + ... + b_-m z^-m``.

    ``tail`` holds ``b0, b_-1, ..., b_-m``. ``self_check`` is the largest
    coefficient of the normalised functional equation left over after
    substitution, an a-posteriori measure of the solve.
    """

    b1: complex
    tail: tuple
    order: int
    valid_radius: float
    degree: int = 0
    self_check: float = 0.0
    _growth: float = field(default=0.0, repr=False)

    def coefficients(self):
        return np.array(self.tail, dtype=np.complex128)

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        """Evaluate the truncated series at ``z`` (scalar or array)."""
        z = np.asarray(z, dtype=np.complex128)
        t = 1.0 / z
        acc = np.zeros_like(z)
        for b in reversed(self.tail):
            acc = acc * t + b
        return self.b1 * z + acc

    def truncation_bound(self, z) -> float:
        """Heuristic bound on the omitted terms at ``|z|``.

        The coefficients are assumed to grow at most like ``r^k`` with ``r``
        read off the computed tail, so the remainder is a geometric series.
        """
        az = abs(z)
        r = self._growth
        if r >= az:
            return math.inf
        q = r / az
        return abs(self.b1) * az * q ** (self.order + 2) / (1.0 - q)

    def to_dict(self):
        return {
            "b1": [self.b1.real, self.b1.imag],
            "coefficients": [[c.real, c.imag] for c in self.tail],
            "order": self.order,
            "valid_radius": self.valid_radius,
        }

    @classmethod
    def from_dict(cls, data, degree=0):
        b1 = complex(*data["b1"])
        tail = tuple(complex(*c) for c in data["coefficients"])
        return cls(b1, tail, int(data["order"]), float(data["valid_radius"]), degree, 0.0, _growth_of(b1, tail))


def _growth_of(b1, tail):
    c = [abs(x / b1) for x in tail]
    est = 0.0
    for k, v in enumerate(c[1:], start=1):
        if v > 0:
            est = max(est, v ** (1.0 / k))
    return est


def bottcher_series(f: Poly, m: int = DEFAULT_ORDER) -> BottcherSeries:
    """Laurent coefficients of the Böttcher coordinate up to ``z^-m``.

    For ``z^2 + c`` this gives ``b1 = 1``, ``b0 = 0``, ``b_-1 = c/2``.
    """
    fc = as_complex(f)
    d = fc.degree
    if d < 2:
        raise ValueError("bottcher_series needs degree >= 2")
    if m < 0:
        raise ValueError("order must be >= 0")
    a = fc.array
    b1 = principal_root(a[0], d - 1)
    M = m + 2  # c_0 .. c_{m+1}
    one_u, T = _identity_parts(a, d, M)
    C = np.zeros(M, dtype=np.complex128)
    # each pass fixes at least one more coefficient
    for _ in range(M):
        R = _residual(C, one_u, T, d, M)
        R[0] = 0.0
        C_new = C + R / d
        if np.array_equal(C_new, C):
            break
        C = C_new
    check = float(np.abs(_residual(C, one_u, T, d, M)).max())
    tail = tuple(complex(b1 * c) for c in C[1:])
    B2 = escape_radius(fc).growth_radius
    return BottcherSeries(b1, tail, m, 10.0 * B2, d, check, _growth_of(b1, tail))


def _u_and_next(q, w):
    """For monic centred q: ``u = q(w)/w^d - 1`` and a bound ``s >= |u|``."""
    d = len(q) - 1
    t = 1.0 / w
    at = abs(t)
    u = 0j
    s = 0.0
    for j in range(d, 1, -1):
        u = (u + q[j]) * t
        s = (s + abs(q[j])) * at
    u *= t
    s *= at
    return u, s


def bottcher_eval(f: Poly, z, tol: float = 1e-14, max_terms: int = 200) -> complex:
    """Böttcher coordinate ``phi_f(z)`` from the convergent product.

    After conjugating to a monic centred ``q = A f A^-1``,

        phi_q(w) = w prod_k (1 + u_k)^(1/d^(k+1)),   1 + u_k = q(w_k)/w_k^d,

    with principal branches, and ``phi_f = phi_q o A``. The product is cut
    when ``|u_k| / (d^(k+1) (1 - |u_k|))`` drops below ``tol``.

    Raises
    ------
    OutsideDomain
        Some ``|u_k| >= 1``: ``z`` is too close to the filled Julia set.
    """
    fc = as_complex(f)
    d = fc.degree
    if d < 2:
        raise ValueError("bottcher_eval needs degree >= 2")
    q, A = monic_centered(fc)
    qc = [complex(c) for c in q.coeffs]
    w = complex(A.alpha) * complex(z) + complex(A.beta)
    if w == 0:
        raise OutsideDomain("point maps to 0 in the normal form")
    log_sum = 0j
    weight = 1.0 / d
    wk = w
    for _ in range(max_terms):
        u, s = _u_and_next(qc, wk)
        if abs(u) >= 1.0:
            raise OutsideDomain(f"|u_k| = {abs(u):.3g} >= 1; z is outside the Böttcher domain")
        log_sum += weight * cmath.log(1.0 + u)
        bound = weight * s / (1.0 - s) if s < 1 else math.inf
        if bound < tol:
            break
        if d * math.log(abs(wk)) > 690.0:
            # remaining factors are 1 to double precision
            break
        wk = wk**d * (1.0 + u)
        weight /= d
    return complex(w * cmath.exp(log_sum))


def conjugation_zeta(f: Poly, m: int = DEFAULT_ORDER, tol: float = ZETA_TOL) -> complex:
    """Root of unity relating the Böttcher coordinates of ``f`` and ``conj(f)``.

    Returns ``zeta = conj(b1(f)) / b1(conj f)`` after checking
    ``conj(b_k(f)) = zeta b_k(conj f)`` for every computed coefficient and
    ``zeta^(d-1) = 1``, both within ``tol`` (relative to ``max(1, |b_k|)``).

    Raises
    ------
    RelationViolated
    """
    s = bottcher_series(f, m)
    sb = bottcher_series(conj_coeffs(as_complex(f)), m)
    d = s.degree
    zeta = s.b1.conjugate() / sb.b1
    if abs(zeta ** (d - 1) - 1.0) > tol:
        raise RelationViolated(f"zeta^(d-1) - 1 = {abs(zeta ** (d - 1) - 1.0):.3g}")
    for k, (x, y) in enumerate(zip(s.tail, sb.tail)):
        gap = abs(x.conjugate() - zeta * y)
        if gap > tol * max(1.0, abs(x)):
            raise RelationViolated(f"coefficient b_-{k} mismatch {gap:.3g}")
    return zeta


def zeta_report(f: Poly, m: int = DEFAULT_ORDER):
    """Like :func:`conjugation_zeta` but returns the measured gaps instead of raising."""
    s = bottcher_series(f, m)
    sb = bottcher_series(conj_coeffs(as_complex(f)), m)
    d = s.degree
    zeta = s.b1.conjugate() / sb.b1
    gaps = [abs(x.conjugate() - zeta * y) / max(1.0, abs(x)) for x, y in zip(s.tail, sb.tail)]
    return {
        "zeta": zeta,
        "root_gap": abs(zeta ** (d - 1) - 1.0),
        "coefficient_gap": max(gaps, default=0.0),
    }
