"""Canonical heights over Q.

``h_f(a) = lim d^-n h(f^n(a))`` splits into local heights
``lambda_v(a) = lim d^-n log+|f^n(a)|_v``, one for each place of Q. The
archimedean one is the Green function. A p-adic one has a closed form once
the orbit enters the dominance region, where ``v(f(z)) = v(a_d) + d v(z)``
holds exactly from then on. Primes of good reduction contribute 0 and are
skipped, so only finitely many places are visited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .algebraic import critical_classes
from .errors import BudgetExhausted, IrrationalCriticalPoints
from .escape import green
from .poly import RationalPoly

INF = "inf"
# stop exact iteration once numerators/denominators exceed this many bits
EXACT_BITS = 1 << 18
# orbit length followed in fixed p-adic precision inside the bounded disc
PADIC_STEPS = 200

Place = Union[str, int]


def weil_height(a) -> float:
    """Absolute logarithmic height ``log max(|num|, |den|)`` of a rational."""
    a = Fraction(a)
    return math.log(max(abs(a.numerator), a.denominator))


def valuation(x, p: int) -> float:
    """p-adic valuation of a rational; ``inf`` for 0."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _eval(f: RationalPoly, z: Fraction) -> Fraction:
    acc = f.coeffs[0]
    for c in f.coeffs[1:]:
        acc = acc * z + c
    return acc


def _bits(z: Fraction) -> int:
    return max(z.numerator.bit_length(), z.denominator.bit_length())


def _dominance_threshold(f: RationalPoly, p: int) -> float:
    """``theta`` with ``v(z) < theta`` implying ``v(f(z)) = v(a_d) + d v(z)``."""
    d = f.degree
    vd = valuation(f.coeffs[0], p)
    theta = -vd / (d - 1)
    for k, c in enumerate(f.coeffs[1:], start=1):
        i = d - k
        if c != 0:
            theta = min(theta, (valuation(c, p) - vd) / (d - i))
    return theta


def _good_reduction(f: RationalPoly, p: int) -> bool:
    if valuation(f.coeffs[0], p) != 0:
        return False
    return all(valuation(c, p) >= 0 for c in f.coeffs[1:])


@dataclass(frozen=True)
class LocalHeight:
    place: Place
    value: float
    certified: bool
    error_bound: float = 0.0
    step: Optional[int] = None

    def to_dict(self):
        return {
            "place": self.place,
            "value": self.value,
            "certified": self.certified,
            "error_bound": self.error_bound,
        }


def _reduce(z: Fraction, p: int, prec: int) -> Fraction:
    """Representative of ``z`` modulo ``p^prec`` with small numerator and denominator."""
    if z == 0:
        return z
    v = valuation(z, p)
    if v >= prec:
        return Fraction(0)
    num, den = z.numerator, z.denominator
    if v > 0:
        num //= p**v
    elif v < 0:
        den //= p ** (-v)
    M = p ** (prec - v)
    w = (num * pow(den, -1, M)) % M
    return Fraction(w) * Fraction(p) ** v


def _padic_local(f: RationalPoly, a: Fraction, p: int, steps: int = PADIC_STEPS) -> LocalHeight:
    """Local height at ``p``.

    Outside the disc ``v >= theta`` the closed form applies. Inside it the
    orbit is followed in fixed absolute precision: ``z`` is known modulo
    ``p^P`` and one step costs ``-m`` digits, where ``m`` bounds the
    valuation of ``(f(z) - f(z')) / (z - z')`` on the disc. Valuations below
    the precision floor are exact, so reaching dominance is still certified.
    If the orbit stays in the disc for ``N`` steps the value is 0 up to
    ``d^-N`` times the largest local height one step out of the disc.
    """
    d = f.degree
    a = Fraction(a)
    if _good_reduction(f, p) and valuation(a, p) >= 0:
        return LocalHeight(p, 0.0, True)
    theta = _dominance_threshold(f, p)
    vd = valuation(f.coeffs[0], p)
    t = math.ceil(theta)
    vals = [(d - k, valuation(c, p)) for k, c in enumerate(f.coeffs) if c != 0]
    m = min(vc + (i - 1) * t for i, vc in vals if i >= 1)
    loss = max(0, -m)
    prec = t + 8 + steps * loss
    z = a
    for n in range(steps + 1):
        v = valuation(z, p)
        if v < theta:
            val = (-v - vd / (d - 1)) * math.log(p) / d**n
            return LocalHeight(p, val, True, 0.0, n)
        if prec - loss <= t:
            break
        z = _reduce(_eval(f, _reduce(z, p, prec)), p, prec - loss)
        prec -= loss
    # one step out of the disc lands at valuation >= theta1
    theta1 = min(vc + i * t for i, vc in vals)
    top = max(0.0, (-theta1 - vd / (d - 1)) * math.log(p))
    return LocalHeight(p, 0.0, False, top / d ** (n + 1), n)


def _arch_local(f: RationalPoly, a: Fraction, tol: float) -> LocalHeight:
    g = green(f, complex(float(a)), tol=tol)
    return LocalHeight(INF, g.value, False, g.error_bound, g.escape_step)


def local_height(f: RationalPoly, a, v: Place, tol: float = 1e-12) -> LocalHeight:
    """Local canonical height ``lambda_v(a)`` at ``v = "inf"`` or a prime."""
    if f.degree < 2:
        raise ValueError("local_height needs degree >= 2")
    a = Fraction(a)
    if v == INF or v == math.inf:
        return _arch_local(f, a, tol)
    p = int(v)
    if p < 2:
        raise ValueError(f"not a place: {v!r}")
    return _padic_local(f, a, p)


def relevant_primes(f: RationalPoly, a) -> list:
    """Primes where the local height of ``a`` can be nonzero."""
    import sympy

    a = Fraction(a)
    n = 1
    for c in f.coeffs:
        n *= c.denominator
    n *= abs(f.coeffs[0].numerator) * a.denominator
    return sorted(int(p) for p in sympy.factorint(n)) if n > 1 else []


@dataclass(frozen=True)
class HeightReport:
    """Canonical height with its local decomposition."""

    global_: float
    locals: tuple
    error_bound: float
    preperiodic: Optional[bool] = None
    certificate: Optional[dict] = None

    @property
    def multiplicative(self) -> float:
        return math.exp(self.global_)

    @property
    def value(self) -> float:
        return self.global_

    def to_dict(self):
        out = {
            "global": self.global_,
            "multiplicative": self.multiplicative,
            "error_bound": self.error_bound,
            "locals": [loc.to_dict() for loc in self.locals],
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


@dataclass(frozen=True)
class Preperiodicity:
    """Verdict of :func:`is_preperiodic` with its certificate.

    For a cycle, ``tail`` and ``period`` satisfy ``f^tail(a) = f^(tail+period)(a)``.
    For escape, ``place`` and ``step`` name where the orbit provably leaves
    every bounded set.
    """

    preperiodic: bool
    tail: Optional[int] = None
    period: Optional[int] = None
    place: Optional[Place] = None
    step: Optional[int] = None

    def __bool__(self):
        return self.preperiodic

    def to_dict(self):
        if self.preperiodic:
            return {"preperiodic": True, "kind": "cycle", "tail": self.tail, "period": self.period}
        return {"preperiodic": False, "kind": "escape", "place": self.place, "step": self.step}


def _arch_radius(f: RationalPoly) -> Fraction:
    """Exact ``B(f)``: ``|z| > B`` forces strict growth by a factor > 1."""
    rest = sum(abs(c) for c in f.coeffs[1:])
    return max(Fraction(1), (1 + rest) / abs(f.coeffs[0]))


def is_preperiodic(f: RationalPoly, a, budget: int = 256, bits: int = EXACT_BITS) -> Preperiodicity:
    """Exact preperiodicity test for a rational point.

    Raises
    ------
    BudgetExhausted
        Neither a cycle nor a certified escape within ``budget`` steps.
    """
    if f.degree < 2:
        raise ValueError("is_preperiodic needs degree >= 2")
    a = Fraction(a)
    B = _arch_radius(f)
    primes = relevant_primes(f, a)
    thetas = {p: _dominance_threshold(f, p) for p in primes}
    seen = {}
    z = a
    for k in range(budget + 1):
        if z in seen:
            return Preperiodicity(True, tail=seen[z], period=k - seen[z])
        seen[z] = k
        if abs(z) > B:
            return Preperiodicity(False, place=INF, step=k)
        for p, th in thetas.items():
            if valuation(z, p) < th:
                return Preperiodicity(False, place=p, step=k)
        if _bits(z) > bits:
            break
        z = _eval(f, z)
    raise BudgetExhausted(f"no cycle or escape certificate after {k} steps")


def canonical_height(f: RationalPoly, a, tol: float = 1e-12) -> HeightReport:
    """Canonical height ``h_f(a)`` as a sum of local heights."""
    if not isinstance(f, RationalPoly):
        raise TypeError("canonical_height needs a RationalPoly")
    if f.degree < 2:
        raise ValueError("canonical_height needs degree >= 2")
    a = Fraction(a)
    primes = relevant_primes(f, a)
    try:
        pp = is_preperiodic(f, a)
    except BudgetExhausted:
        pp = None
    if pp is not None and pp.preperiodic:
        locs = (LocalHeight(INF, 0.0, True),) + tuple(LocalHeight(p, 0.0, True) for p in primes)
        return HeightReport(0.0, locs, 0.0, True, pp.to_dict())
    locs = [_arch_local(f, a, tol)]
    locs += [_padic_local(f, a, p) for p in primes]
    total = sum(loc.value for loc in locs)
    err = sum(loc.error_bound for loc in locs)
    cert = pp.to_dict() if pp is not None else None
    return HeightReport(total, tuple(locs), err, None if pp is None else False, cert)


@dataclass(frozen=True)
class CriticalHeightReport:
    """Critical height ``sum mult * h_f(c)`` and its per-class breakdown.

    Each entry of ``per_critical_point`` has the point (a Fraction for a
    rational critical point, else the defining factor as a tuple), the
    multiplicity counted over the class, the height and how it was obtained.
    """

    value: float
    per_critical_point: tuple
    error_bound: float = 0.0
    certified_zero: bool = False

    @property
    def multiplicative(self) -> float:
        return math.exp(self.value)

    def to_dict(self):
        entries = []
        for e in self.per_critical_point:
            pt = e["point"]
            entries.append(
                {
                    "point": str(pt) if isinstance(pt, Fraction) else [str(c) for c in pt],
                    "multiplicity": e["multiplicity"],
                    "height": e["height"],
                    "source": e["source"],
                }
            )
        return {
            "value": self.value,
            "multiplicative": self.multiplicative,
            "error_bound": self.error_bound,
            "certified_zero": self.certified_zero,
            "per_critical_point": entries,
        }


def critical_height(f: RationalPoly, tol: float = 1e-12) -> CriticalHeightReport:
    """Critical height of a rational polynomial.

    Every Galois class of critical points certified preperiodic contributes 0,
    rational or not. Remaining classes must be rational points; their
    canonical heights are summed with multiplicity.

    Raises
    ------
    IrrationalCriticalPoints
        A class of irrational critical points is not certified preperiodic.
    """
    if not isinstance(f, RationalPoly):
        raise TypeError("critical_height needs a RationalPoly")
    if f.degree < 2:
        raise ValueError("critical_height needs degree >= 2")
    classes = critical_classes(f)
    for cls in classes:
        if not cls.preperiodic and cls.degree > 1:
            raise IrrationalCriticalPoints(
                f"critical points of degree {cls.degree} over Q are not certified preperiodic"
            )
    entries = []
    total, err = 0.0, 0.0
    for cls in classes:
        point = cls.rational_point if cls.degree == 1 else cls.factor
        if cls.preperiodic:
            entries.append({"point": point, "multiplicity": cls.count, "height": 0.0, "source": "cycle"})
            continue
        rep = canonical_height(f, point, tol)
        total += cls.multiplicity * rep.global_
        err += cls.multiplicity * rep.error_bound
        entries.append({"point": point, "multiplicity": cls.multiplicity, "height": rep.global_, "source": "height"})
    zero = all(e["source"] == "cycle" for e in entries)
    return CriticalHeightReport(total, tuple(entries), err, zero)


def direct_limit(f: RationalPoly, a, n: int) -> float:
    """Oracle ``d^-n h(f^n(a))`` from the exact rational orbit."""
    z = Fraction(a)
    for _ in range(n):
        z = _eval(f, z)
    return weil_height(z) / f.degree**n
