"""Intertwining witnesses and Lyapunov-exponent comparison for witnessed pairs.

``f`` and ``g`` are intertwined when non-constant ``h1, h2, R`` and ``n``
satisfy ``f^n o h1 = h1 o R`` and ``g^n o h2 = h2 o R``. This module builds
and checks such witnesses; it never decides intertwining in general.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import IrrationalCriticalPoints, WitnessInvalid
from .poly import (
    ComplexPoly,
    LaurentPoly,
    Poly,
    RationalPoly,
    compose,
    compose_laurent,
    conj_coeffs,
    coefficient_distance,
    iterate,
    format_coefficients,
)

COMPLEX_TOL = 1e-9
IDENTITY_POLY = RationalPoly((1, 0))


def _laurent_after(h: LaurentPoly, R: RationalPoly) -> LaurentPoly:
    """``h o R`` for a Laurent ``h``; negative powers need a monomial ``R``."""
    nonzero = [(R.degree - i, c) for i, c in enumerate(R.coeffs) if c != 0]
    if len(nonzero) == 1:
        m, c = nonzero[0]
        return LaurentPoly({k * m: v * c**k for k, v in h.terms.items()})
    if min(h.terms, default=0) < 0:
        raise ValueError("h o R with negative powers in h needs a monomial R")
    RL = LaurentPoly.from_poly(R)
    out = LaurentPoly()
    for k, v in h.terms.items():
        out = out + (RL**k) * v
    return out


def check_semiconjugacy(f: Poly, h, R: Poly, n: int = 1, budget: int = 2**20) -> bool:
    """Whether ``f^n o h = h o R``.

    Exact for rational input (``h`` may be a :class:`LaurentPoly`); for
    complex input the coefficients must agree within ``1e-9`` times the
    largest coefficient modulus.

    Raises
    ------
    DegreeBudgetExceeded
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    fn = iterate(f, n, budget)
    if isinstance(h, LaurentPoly):
        if not isinstance(fn, RationalPoly) or not isinstance(R, RationalPoly):
            raise TypeError("Laurent witnesses need rational f and R")
        return compose_laurent(fn, h) == _laurent_after(h, R)
    lhs = compose(fn, h)
    rhs = compose(h, R)
    if isinstance(lhs, RationalPoly) and isinstance(rhs, RationalPoly):
        return lhs.coeffs == rhs.coeffs
    if lhs.degree != rhs.degree:
        return False
    scale = max(1.0, max(abs(complex(c)) for c in lhs.coeffs + rhs.coeffs))
    return coefficient_distance(lhs, rhs) <= COMPLEX_TOL * scale


@dataclass(frozen=True)
class IntertwiningWitness:
    """Data ``(h1, h2, R, n)`` certifying that two polynomials are intertwined."""

    h1: Poly
    h2: Poly
    R: Poly
    n: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        for p in (self.h1, self.h2, self.R):
            if p.degree < 1:
                raise ValueError("witness maps must be non-constant")

    def validates(self, f: Poly, g: Poly) -> bool:
        return check_semiconjugacy(f, self.h1, self.R, self.n) and check_semiconjugacy(g, self.h2, self.R, self.n)

    def to_dict(self):
        return {
            "h1": format_coefficients(self.h1),
            "h2": format_coefficients(self.h2),
            "R": format_coefficients(self.R),
            "n": self.n,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "IntertwiningWitness":
        from .parser import parse_poly

        data = json.loads(text)
        return cls(parse_poly(data["h1"]), parse_poly(data["h2"]), parse_poly(data["R"]), int(data["n"]))


def make_intertwined_pair(h: Poly, k: Poly):
    """``f = h o k`` and ``g = k o h`` with a verified witness.

    ``f o h = h o k o h = h o g`` gives ``h1 = h, R = g``; the second
    equation ``g o h2 = h2 o g`` holds with ``h2 = z``.
    """
    if h.degree < 1 or k.degree < 1 or h.degree * k.degree < 2:
        raise ValueError("need deg h, deg k >= 1 and deg h * deg k >= 2")
    f = compose(h, k)
    g = compose(k, h)
    ident = IDENTITY_POLY if isinstance(g, RationalPoly) else ComplexPoly((1, 0))
    w = IntertwiningWitness(h, ident, g, 1)
    if not w.validates(f, g):
        raise AssertionError("constructed witness failed verification")
    return f, g, w


@dataclass(frozen=True)
class RigidityReport:
    """Measured gaps for a witnessed pair.

    ``height_gap`` is None when either critical height is unavailable
    (complex coefficients or unresolved irrational critical points).
    """

    lyapunov_f: float
    lyapunov_g: float
    lyapunov_gap: float
    height_gap: Optional[float]
    tol: float

    @property
    def passed(self) -> bool:
        ok = self.lyapunov_gap <= self.tol
        return ok and (self.height_gap is None or self.height_gap <= self.tol)

    def to_dict(self):
        return {
            "lyapunov_f": self.lyapunov_f,
            "lyapunov_g": self.lyapunov_g,
            "lyapunov_gap": self.lyapunov_gap,
            "height_gap": self.height_gap,
            "tol": self.tol,
            "passed": self.passed,
        }


def _crit_height(f):
    from .heights import critical_height

    if not isinstance(f, RationalPoly):
        return None
    try:
        return critical_height(f).value
    except IrrationalCriticalPoints:
        return None


def verify_rigidity_if_direction(
    f: Poly, g: Poly, w: IntertwiningWitness, tol: float = 1e-6, conjugate: bool = False
) -> RigidityReport:
    """Compare Lyapunov exponents (and critical heights) of a witnessed pair.

    With ``conjugate=True`` the witness is read as intertwining ``f`` with
    ``conj(g)``; the exponents of ``g`` and ``conj(g)`` coincide.

    Raises
    ------
    WitnessInvalid
    """
    from .lyapunov import lyap_przytycki

    partner = conj_coeffs(g) if conjugate else g
    if not w.validates(f, partner):
        raise WitnessInvalid("witness does not satisfy both semiconjugacy equations")
    Lf = lyap_przytycki(f).value
    Lg = lyap_przytycki(g).value
    hf, hg = _crit_height(f), _crit_height(g)
    hgap = None if hf is None or hg is None else abs(hf - hg)
    return RigidityReport(Lf, Lg, abs(Lf - Lg), hgap, tol)


def identity_witness(f: Poly) -> IntertwiningWitness:
    """Trivial witness ``(z, z, f, 1)`` intertwining ``f`` with itself."""
    ident = IDENTITY_POLY if isinstance(f, RationalPoly) else ComplexPoly((1, 0))
    return IntertwiningWitness(ident, ident, f, 1)


def chebyshev_witness(d: int):
    """``T_d o (z + 1/z) = (z + 1/z) o z^d`` as ``(h, R)`` Laurent data."""
    return LaurentPoly({1: Fraction(1), -1: Fraction(1)}), RationalPoly((1,) + (0,) * d)
