"""Polynomial arithmetic over Q (exact) and C (double precision).

Coefficients are stored highest degree first, ``coeffs[0] = a_d`` and
``coeffs[-1] = a_0``, matching :func:`numpy.polyval`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

import numpy as np

from .errors import DegreeBudgetExceeded

#: Largest degree :func:`iterate` will build unless told otherwise.
DEFAULT_DEGREE_BUDGET = 2**20


def _strip(coeffs):
    coeffs = list(coeffs)
    i = 0
    while i < len(coeffs) - 1 and coeffs[i] == 0:
        i += 1
    return coeffs[i:]


def _add(p, q):
    n = max(len(p), len(q))
    p = [0] * (n - len(p)) + list(p)
    q = [0] * (n - len(q)) + list(q)
    return [a + b for a, b in zip(p, q)]


def _mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


class _Poly:
    """Shared behaviour; subclasses fix the coefficient ring."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(self._coerce(c) for c in _strip(self.coeffs))
        if not cs:
            raise ValueError("empty coefficient list")
        if cs[0] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[0]

    def __call__(self, z):
        return evaluate(self, z)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"{type(self).__name__}({format_expression(self)!r})"

    def derivative(self):
        d = self.degree
        if d == 0:
            # the zero polynomial is not representable
            raise ValueError("derivative of a constant polynomial is zero")
        return type(self)(tuple(c * (d - i) for i, c in enumerate(self.coeffs[:-1])))


@dataclass(frozen=True, repr=False)
class RationalPoly(_Poly):
    """Exact polynomial with rational coefficients."""

    coeffs: tuple

    @staticmethod
    def _coerce(c):
        if isinstance(c, Fraction):
            return c
        if isinstance(c, (int, Rational)):
            return Fraction(c)
        if isinstance(c, str):
            return Fraction(c)
        raise TypeError(f"not a rational coefficient: {c!r}")

    def to_complex(self) -> "ComplexPoly":
        return ComplexPoly(tuple(complex(c) for c in self.coeffs))

    @property
    def array(self) -> np.ndarray:
        return self.to_complex().array


@dataclass(frozen=True, repr=False)
class ComplexPoly(_Poly):
    """Double-precision polynomial with complex coefficients."""

    coeffs: tuple

    @staticmethod
    def _coerce(c):
        c = complex(c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError("coefficients must be finite")
        return c

    def to_complex(self) -> "ComplexPoly":
        return self

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.complex128)


Poly = Union[RationalPoly, ComplexPoly]


def as_complex(p: Poly) -> ComplexPoly:
    return p.to_complex()


def _result_type(*polys):
    return RationalPoly if all(isinstance(p, RationalPoly) for p in polys) else ComplexPoly


@dataclass(frozen=True)
class AffineMap:
    """The map ``z -> alpha*z + beta``."""

    alpha: complex
    beta: complex = 0

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("affine map must be invertible (alpha != 0)")

    @property
    def is_rational(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in (self.alpha, self.beta))

    def __call__(self, z):
        return self.alpha * z + self.beta

    def inverse(self) -> "AffineMap":
        if self.is_rational:
            a = Fraction(self.alpha)
            return AffineMap(1 / a, -Fraction(self.beta) / a)
        return AffineMap(1 / self.alpha, -self.beta / self.alpha)

    def as_poly(self) -> Poly:
        if self.is_rational:
            return RationalPoly((self.alpha, self.beta))
        return ComplexPoly((self.alpha, self.beta))


IDENTITY = AffineMap(1, 0)


# ---------------------------------------------------------------------------
# operations


def evaluate(p: Poly, z):
    """Horner evaluation. Works for scalars, Fractions and numpy arrays."""
    acc = p.coeffs[0]
    for c in p.coeffs[1:]:
        acc = acc * z + c
    return acc


def compose(p: Poly, q: Poly) -> Poly:
    """Return ``p o q``, of degree ``deg p * deg q``."""
    cls = _result_type(p, q)
    if cls is ComplexPoly:
        qa = np.asarray(q.to_complex().coeffs, dtype=np.complex128)
        acc = np.array([p.to_complex().coeffs[0]], dtype=np.complex128)
        for c in p.to_complex().coeffs[1:]:
            acc = np.convolve(acc, qa)
            acc[-1] += c
        return ComplexPoly(tuple(acc))
    acc = [p.coeffs[0]]
    for c in p.coeffs[1:]:
        acc = _mul(acc, q.coeffs)
        acc[-1] += c
    return RationalPoly(tuple(acc))


def iterate(p: Poly, n: int, budget: int = DEFAULT_DEGREE_BUDGET) -> Poly:
    """n-fold composition ``p o ... o p``.

    Raises
    ------
    DegreeBudgetExceeded
        If ``deg(p)**n`` exceeds ``budget``.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if p.degree > 1 and n * math.log(p.degree) > math.log(budget) + 1e-12:
        raise DegreeBudgetExceeded(f"degree {p.degree}^{n} exceeds budget {budget}")
    # repeated squaring keeps the number of compositions logarithmic
    result = None
    base = p
    while n:
        if n & 1:
            result = base if result is None else compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def conjugate_by(p: Poly, A: AffineMap) -> Poly:
    """Return ``A o p o A^{-1}``."""
    Ainv = A.inverse()
    inner = Ainv.as_poly()
    outer = A.as_poly()
    if isinstance(p, RationalPoly) and not A.is_rational:
        p = p.to_complex()
    return compose(outer, compose(p, inner))


def _rational_root(x: Fraction, k: int):
    """Exact k-th root of a positive rational, or None."""
    if x <= 0:
        return None
    num = _int_root(x.numerator, k)
    den = _int_root(x.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(n: int, k: int):
    r = round(n ** (1.0 / k)) if n < 2**1000 else None
    if r is None:
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid**k < n:
                lo = mid + 1
            else:
                hi = mid
        r = lo
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def principal_root(x, k: int) -> complex:
    """Principal k-th root ``exp(Log(x)/k)``."""
    if k == 1:
        return complex(x)
    x = complex(x)
    return cmath.exp(cmath.log(x) / k)


def monic_centered(p: Poly):
    """Affinely conjugate ``p`` to a monic, centred polynomial.

    Returns ``(q, A)`` with ``q = A o p o A^{-1}``, ``q`` monic and with zero
    ``z^{d-1}`` coefficient. ``A.alpha`` is the principal (d-1)-th root of
    the leading coefficient. The result stays exact when the root is rational.
    """
    d = p.degree
    if d < 2:
        raise ValueError("monic_centered needs degree >= 2")
    ad, ad1 = p.coeffs[0], p.coeffs[1]
    alpha = None
    if isinstance(p, RationalPoly):
        alpha = _rational_root(ad, d - 1)
    if alpha is None:
        alpha = principal_root(ad, d - 1)
        ad, ad1 = complex(ad), complex(ad1)
    beta = alpha * ad1 / (d * ad)
    A = AffineMap(alpha, beta)
    q = conjugate_by(p, A)
    # clean the two normalised coefficients so the invariants hold exactly
    cs = list(q.coeffs)
    cs[0] = 1
    cs[1] = 0
    return type(q)(tuple(cs)), A


def chebyshev(d: int) -> RationalPoly:
    """Normalised Chebyshev polynomial with ``T_d(z + 1/z) = z^d + z^-d``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    prev = [Fraction(2)]  # T_0 = 2 under this normalisation
    cur = [Fraction(1), Fraction(0)]
    for _ in range(d - 1):
        nxt = _add(cur + [Fraction(0)], [-c for c in prev])
        prev, cur = cur, nxt
    return RationalPoly(tuple(cur))


def critical_points(p: Poly, tol: float = 1e-10):
    """Roots of ``p'`` with multiplicity, as a :class:`~polydyn.rootfind.RootSet`."""
    from .rootfind import all_roots

    if p.degree < 2:
        raise ValueError("critical_points needs degree >= 2")
    return all_roots(p.derivative(), tol=tol)


def conj_coeffs(p: Poly) -> Poly:
    """Complex-conjugate every coefficient."""
    if isinstance(p, RationalPoly):
        return p
    return ComplexPoly(tuple(c.conjugate() for c in p.coeffs))


def monomial(d: int) -> RationalPoly:
    return RationalPoly((1,) + (0,) * d)


def linear(alpha, beta=0) -> Poly:
    return AffineMap(alpha, beta).as_poly()


def poly_sub_constant(p: Poly, w) -> Poly:
    cs = list(p.coeffs)
    cs[-1] = cs[-1] - w
    if isinstance(p, RationalPoly) and isinstance(w, (int, Fraction)):
        return RationalPoly(tuple(cs))
    return ComplexPoly(tuple(complex(c) for c in cs))


def coefficient_distance(p: Poly, q: Poly) -> float:
    """Max coefficientwise difference, padding the shorter polynomial."""
    n = max(len(p.coeffs), len(q.coeffs))
    a = [0] * (n - len(p.coeffs)) + list(p.coeffs)
    b = [0] * (n - len(q.coeffs)) + list(q.coeffs)
    return max(abs(complex(x) - complex(y)) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# exact helpers over Q used by the heights module


def rational_divmod(num: Sequence[Fraction], den: Sequence[Fraction]):
    """Long division of coefficient lists (highest first) over Q."""
    num = [Fraction(c) for c in num]
    den = _strip([Fraction(c) for c in den])
    if den == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [Fraction(0)], _strip(num)
    q = []
    rem = list(num)
    lead = den[0]
    while len(rem) >= len(den):
        c = rem[0] / lead
        q.append(c)
        for j, dj in enumerate(den):
            rem[j] -= c * dj
        rem.pop(0)
    return q, _strip(rem) if rem else [Fraction(0)]


def rational_gcd(a: Sequence[Fraction], b: Sequence[Fraction]):
    """Monic gcd of two rational coefficient lists."""
    a = _strip([Fraction(c) for c in a])
    b = _strip([Fraction(c) for c in b])
    while b != [0]:
        _, r = rational_divmod(a, b)
        a, b = b, r
    if a == [0]:
        return a
    return [c / a[0] for c in a]


# ---------------------------------------------------------------------------
# Laurent polynomials (finite maps exponent -> coefficient)


class LaurentPoly:
    """Minimal exact Laurent polynomial in one variable."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {int(k): Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def from_poly(cls, p: RationalPoly) -> "LaurentPoly":
        d = p.degree
        return cls({d - i: c for i, c in enumerate(p.coeffs)})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __mul__(self, other):
        other = _as_laurent(other)
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        out = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return self.terms == _as_laurent(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        body = " + ".join(f"{v}*z^{k}" for k, v in sorted(self.terms.items(), reverse=True))
        return f"LaurentPoly({body or '0'})"

    def substitute_power(self, d: int) -> "LaurentPoly":
        """Return ``self(z^d)``."""
        return LaurentPoly({k * d: v for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, RationalPoly):
        return LaurentPoly.from_poly(x)
    return LaurentPoly.constant(x)


def compose_laurent(p: RationalPoly, L: LaurentPoly) -> LaurentPoly:
    """``p(L)`` computed by Horner's rule in the Laurent ring."""
    acc = LaurentPoly.constant(p.coeffs[0])
    for c in p.coeffs[1:]:
        acc = acc * L + c
    return acc


# ---------------------------------------------------------------------------
# text rendering (the parser lives in polydyn.parser)


def _format_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    # complex coefficients always carry the imaginary unit, so the text
    # reparses to a ComplexPoly even when the imaginary part is 0
    c = complex(c)
    re, im = c.real + 0.0, c.imag + 0.0
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{re!r}{sign}{abs(im)!r}i"


def format_coefficients(p: Poly) -> str:
    """Comma-separated coefficient list, highest degree first."""
    return ",".join(_format_scalar(c) for c in p.coeffs)


def format_expression(p: Poly) -> str:
    """Human-readable expression in ``z``."""
    d = p.degree
    parts = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        k = d - i
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        s = _format_scalar(c)
        if isinstance(c, complex):
            s = f"({s})"
        if mono:
            if s == "1":
                s = ""
            elif s == "-1":
                s = "-"
            else:
                s += "*"
        parts.append(s + mono)
    out = " + ".join(parts).replace("+ -", "- ")
    return out or "0"
