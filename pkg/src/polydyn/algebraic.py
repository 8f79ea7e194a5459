"""Exact critical-orbit bookkeeping over Q.

The critical points of a rational polynomial split into Galois classes, one
per irreducible factor ``q`` of ``f'``. A class is preperiodic exactly when
the orbit of ``x`` in the field ``Q[x]/(q)`` repeats, so one exact orbit per
factor certifies all of its roots at once, rational or not. Factoring uses
sympy; the orbit arithmetic uses plain Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .poly import RationalPoly, _mul, rational_divmod

#: Orbit length after which a class is reported as undecided.
DEFAULT_MAX_STEPS = 64
#: Bit size of the orbit coefficients after which the search stops.
DEFAULT_MAX_BITS = 4096


@dataclass(frozen=True)
class CriticalClass:
    """One irreducible factor of ``f'`` and what is known about its orbit.

    Attributes
    ----------
    factor : tuple of Fraction
        Monic irreducible factor, highest degree first.
    multiplicity : int
        Exponent of the factor in ``f'``.
    preperiodic : bool or None
        True with ``(tail, period)`` when the exact orbit repeats; False
        when a root of the factor provably escapes; None when neither was
        settled within the step or size cap.
    """

    factor: tuple
    multiplicity: int
    preperiodic: Optional[bool]
    tail: Optional[int] = None
    period: Optional[int] = None
    steps: int = 0

    @property
    def degree(self) -> int:
        return len(self.factor) - 1

    @property
    def count(self) -> int:
        """Number of critical points in the class, with multiplicity."""
        return self.degree * self.multiplicity

    @property
    def rational_point(self) -> Optional[Fraction]:
        return -self.factor[1] if self.degree == 1 else None


def factor_rational(coeffs):
    """Monic irreducible factors over Q with multiplicities."""
    import sympy

    x = sympy.Symbol("x")
    P = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in map(Fraction, coeffs)], x, domain="QQ")
    _, facs = P.factor_list()
    out = []
    for q, e in facs:
        qc = [Fraction(int(c.p), int(c.q)) for c in q.all_coeffs()]
        lead = qc[0]
        out.append((tuple(c / lead for c in qc), int(e)))
    out.sort(key=lambda t: (len(t[0]), [float(c) for c in t[0]]))
    return out


def _mod(p, q):
    if len(p) < len(q):
        return [Fraction(c) for c in p]
    return rational_divmod(p, q)[1]


def _key(r):
    r = list(r)
    while len(r) > 1 and r[0] == 0:
        r.pop(0)
    return tuple(r)


def _bits(r):
    return max(max(c.numerator.bit_length(), c.denominator.bit_length()) for c in r)


def orbit_in_field(f: RationalPoly, q, max_steps=DEFAULT_MAX_STEPS, max_bits=DEFAULT_MAX_BITS):
    """Orbit of ``x`` under ``f`` in ``Q[x]/(q)``; returns ``(tail, period, steps)``.

    ``tail`` and ``period`` are None when no repetition was found.
    """
    q = [Fraction(c) for c in q]
    r = _mod([Fraction(1), Fraction(0)], q)
    seen = {_key(r): 0}
    for k in range(1, max_steps + 1):
        acc = [f.coeffs[0]]
        for c in f.coeffs[1:]:
            acc = _mod(_mul(acc, r), q)
            acc[-1] += c
        r = _key(acc)
        if r in seen:
            return seen[r], k - seen[r], k
        if _bits(r) > max_bits:
            return None, None, k
        seen[r] = k
    return None, None, max_steps


def escapes_numerically(f: RationalPoly, q, max_steps=DEFAULT_MAX_STEPS) -> bool:
    """Whether a root of ``q`` provably leaves the escape disc of ``f``.

    The orbit of one root is followed in double precision together with a
    first-order error radius (initial root error, rounding of Horner and
    amplification by ``|f'|``). Escape counts only when the whole error disc
    lies outside ``|z| > B``, where ``B`` forces growth to infinity. Since
    preperiodicity is shared by the Galois class, one escaping root settles it.
    """
    a = np.array([complex(c) for c in f.coeffs])
    da = np.polyder(a)
    aa = np.abs(a)
    B = max(1.0, (1.0 + aa[1:].sum()) / aa[0])
    qa = np.array([float(c) for c in q])
    roots = np.roots(qa) if len(qa) > 2 else np.array([-qa[1] / qa[0]])
    z = complex(roots[int(np.argmax(np.abs(roots)))])
    err = 1e-10 * (1.0 + abs(z))
    for _ in range(max_steps):
        if abs(z) - err > B:
            return True
        err = abs(np.polyval(da, z)) * err + 4 * len(a) * 2.0**-53 * np.polyval(aa, abs(z)) + err * err * np.polyval(aa, abs(z) + 1.0)
        z = complex(np.polyval(a, z))
        if not err < 1e-3 * max(1.0, abs(z)):
            return False
    return False


@lru_cache(maxsize=256)
def _classes(f: RationalPoly, max_steps, max_bits):
    out = []
    for q, e in factor_rational(f.derivative().coeffs):
        if escapes_numerically(f, q, max_steps):
            out.append(CriticalClass(q, e, False))
            continue
        tail, period, steps = orbit_in_field(f, q, max_steps, max_bits)
        out.append(CriticalClass(q, e, None if tail is None else True, tail, period, steps))
    return tuple(out)


def critical_classes(f: RationalPoly, max_steps=DEFAULT_MAX_STEPS, max_bits=DEFAULT_MAX_BITS):
    """Galois classes of critical points with preperiodicity verdicts.

    Classes are certified preperiodic by an exact orbit, or not preperiodic
    by a numerically certified escape (see :func:`escapes_numerically`).
    """
    if not isinstance(f, RationalPoly):
        raise TypeError("critical_classes needs a RationalPoly")
    if f.degree < 2:
        raise ValueError("critical_classes needs degree >= 2")
    return list(_classes(f, max_steps, max_bits))


def is_pcf(f: RationalPoly, max_steps=DEFAULT_MAX_STEPS) -> Optional[bool]:
    """True when every critical class is certified preperiodic, False when
    some class provably escapes, else None."""
    classes = critical_classes(f, max_steps)
    if any(c.preperiodic is False for c in classes):
        return False
    return True if all(c.preperiodic for c in classes) else None
