"""Text format for polynomials.

Two spellings share one grammar:

* a coefficient list, highest degree first: ``1,0,-6`` or ``1, 0, 1+2i``;
* an expression in ``z``: ``z^2 - 6``, ``(1+2i)*z^3 - 1/2``.

Input containing ``z`` is an expression, anything else a coefficient list.
Numbers are read exactly (``0.25`` is ``1/4``) and arithmetic is carried out
over the Gaussian rationals. The result is a :class:`RationalPoly` unless the
imaginary unit ``i`` occurs anywhere, in which case it is a
:class:`ComplexPoly` with double coefficients.

Grammar::

    list    := expr ("," expr)*
    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary | primary)*       # juxtaposition multiplies
    unary   := ("+" | "-") unary | power
    power   := primary (("^" | "**") unary)?
    primary := NUMBER | "i" | "z" | "(" expr ")"
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .poly import ComplexPoly, RationalPoly

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<op>\*\*|[-+*/^(),])|(?P<name>[A-Za-z_]\w*))"
)


def _tokenize(text):
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad, "number, 'z', 'i' or operator")
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "name" and value not in ("z", "i"):
            raise ParseError(f"unknown name {value!r}", start, "'z' or 'i'")
        out.append((kind, value, start))
        pos = m.end()
    out.append(("end", "", n))
    return out


# Gaussian rationals as (re, im) pairs and polynomials as lists of them,
# lowest degree first.

_ZERO = (Fraction(0), Fraction(0))


def _gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gdiv(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / n, (a[1] * b[0] - a[0] * b[1]) / n)


def _trim(p):
    while len(p) > 1 and p[-1] == _ZERO:
        p.pop()
    return p


def _padd(p, q):
    n = max(len(p), len(q))
    out = [_gadd(p[i] if i < len(p) else _ZERO, q[i] if i < len(q) else _ZERO) for i in range(n)]
    return _trim(out)


def _pneg(p):
    return [(-a, -b) for a, b in p]


def _pmul(p, q):
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == _ZERO:
            continue
        for j, b in enumerate(q):
            out[i + j] = _gadd(out[i + j], _gmul(a, b))
    return _trim(out)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.complex = False

    @property
    def tok(self):
        return self.toks[self.i]

    def _take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def _expect(self, value, what):
        kind, v, pos = self.tok
        if v != value or kind == "end":
            raise ParseError(f"unexpected {v!r}" if kind != "end" else "unexpected end of input", pos, what)
        self.i += 1

    def parse_list(self):
        items = [self.expr()]
        while self.tok[1] == ",":
            self.i += 1
            items.append(self.expr())
        if self.tok[0] != "end":
            raise ParseError(f"unexpected {self.tok[1]!r}", self.tok[2], "operator or end of input")
        return items

    def expr(self):
        acc = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self._take()[1]
            rhs = self.term()
            acc = _padd(acc, rhs if op == "+" else _pneg(rhs))
        return acc

    def _starts_primary(self):
        kind, v, _ = self.tok
        return kind in ("num", "name") or v == "("

    def term(self):
        acc = self.unary()
        while True:
            kind, v, pos = self.tok
            if kind == "op" and v == "*":
                self.i += 1
                acc = _pmul(acc, self.unary())
            elif kind == "op" and v == "/":
                self.i += 1
                den = self.unary()
                if len(den) != 1:
                    raise ParseError("division by a non-constant", pos, "constant divisor")
                if den[0] == _ZERO:
                    raise ParseError("division by zero", pos, "nonzero divisor")
                acc = [_gdiv(c, den[0]) for c in acc]
            elif self._starts_primary():
                acc = _pmul(acc, self.power())
            else:
                return acc

    def unary(self):
        kind, v, _ = self.tok
        if kind == "op" and v in "+-":
            self.i += 1
            inner = self.unary()
            return inner if v == "+" else _pneg(inner)
        return self.power()

    def power(self):
        base = self.primary()
        kind, v, pos = self.tok
        if kind == "op" and v in ("^", "**"):
            self.i += 1
            epos = self.tok[2]
            e = self.unary()
            if len(e) != 1 or e[0][1] != 0 or e[0][0].denominator != 1 or e[0][0] < 0:
                raise ParseError("exponent must be a non-negative integer", epos, "non-negative integer")
            k = int(e[0][0])
            out = [(Fraction(1), Fraction(0))]
            for _ in range(k):
                out = _pmul(out, base)
            return out
        return base

    def primary(self):
        kind, v, pos = self._take()
        if kind == "num":
            return [(Fraction(v), Fraction(0))]
        if kind == "name" and v == "z":
            return [_ZERO, (Fraction(1), Fraction(0))]
        if kind == "name" and v == "i":
            self.complex = True
            return [(Fraction(0), Fraction(1))]
        if v == "(":
            inner = self.expr()
            self._expect(")", "')'")
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", pos, "number, 'z', 'i' or '('")
        raise ParseError(f"unexpected {v!r}", pos, "number, 'z', 'i' or '('")


def _build(coeffs_high_first, is_complex):
    if is_complex:
        return ComplexPoly(tuple(complex(float(a), float(b)) for a, b in coeffs_high_first))
    return RationalPoly(tuple(a for a, _ in coeffs_high_first))


def parse_poly(text: str):
    """Parse a polynomial from its text form.

    Raises
    ------
    ParseError
        With the character ``position`` and an ``expected`` description.
    """
    if not isinstance(text, str):
        raise TypeError("parse_poly expects a string")
    if not text.strip():
        raise ParseError("empty input", 0, "polynomial")
    p = _Parser(text)
    items = p.parse_list()
    if "z" in text:
        if len(items) > 1:
            comma = next(pos for kind, v, pos in p.toks if v == ",")
            raise ParseError("coefficient lists cannot mention z", comma, "an expression without ','")
        poly = items[0]
        coeffs = list(reversed(poly))
    else:
        for k, item in enumerate(items):
            if len(item) > 1:  # pragma: no cover - cannot happen without z
                raise ParseError("coefficient is not a constant", 0, "constant")
        coeffs = [item[0] for item in items]
    # strip leading zeros but keep at least one coefficient
    while len(coeffs) > 1 and coeffs[0] == _ZERO:
        coeffs.pop(0)
    if coeffs[0] == _ZERO:
        raise ParseError("the zero polynomial is not allowed", 0, "a nonzero polynomial")
    return _build(coeffs, p.complex)


def parse_scalar(text: str):
    """Parse a constant: a Fraction when real and ``i``-free, else a complex."""
    p = _Parser(text)
    items = p.parse_list()
    if len(items) != 1 or len(items[0]) != 1 or "z" in text:
        raise ParseError("expected a single constant", 0, "number")
    a, b = items[0][0]
    if p.complex:
        return complex(float(a), float(b))
    return a
