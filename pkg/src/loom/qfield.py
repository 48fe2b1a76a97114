"""Exact arithmetic in the field of rational functions of one variable.

Elements are quotients of polynomials kept canonically as a rational
scale factor times a quotient of coprime primitive integer polynomials
with positive leading coefficients.  Integer coefficients keep the inner
loops on machine arithmetic; the scale factor absorbs all rational
content.  The only analytic operation the rest of the library needs is
behaviour at the origin: the valuation, and exact evaluation when the
valuation is non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .cartan import frac

# Integer polynomials are tuples of ints, lowest degree first, trimmed.


def _trim(coeffs) -> tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _iadd(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)
    )


def _imul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _iscale(a, c: int):
    return _trim(x * c for x in a)


def _content(a) -> int:
    g = 0
    for x in a:
        g = gcd(g, abs(x))
    return g or 1


def _primitive(a):
    if not a:
        return ()
    g = _content(a)
    if a[-1] < 0:
        g = -g
    return tuple(x // g for x in a)


def _pseudo_rem(a, b):
    """Pseudo remainder of a by b over the integers."""
    a = list(a)
    lead = b[-1]
    while len(a) >= len(b) and _trim(a):
        # scaling by the leading coefficient keeps the elimination integral
        a = [lead * x for x in a]
        factor = a[-1] // lead
        shift = len(a) - len(b)
        for k in range(len(b)):
            a[shift + k] -= factor * b[k]
        a = list(_trim(a))
    return _trim(a)


def _igcd_poly(a, b):
    """Primitive gcd of integer polynomials, positive leading coefficient."""
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    return a if a else ()


def _idivexact(a, b):
    """Exact division of integer polynomials; b must divide a."""
    if not a:
        return ()
    out = [0] * (len(a) - len(b) + 1)
    rem = list(a)
    for shift in range(len(a) - len(b), -1, -1):
        coeff = rem[shift + len(b) - 1]
        if coeff % b[-1] != 0:
            raise ArithmeticError("division is not exact")
        c = coeff // b[-1]
        out[shift] = c
        if c:
            for k in range(len(b)):
                rem[shift + k] -= c * b[k]
    if _trim(rem):
        raise ArithmeticError("division is not exact")
    return _trim(out)


def _iorder(a) -> int:
    for k, c in enumerate(a):
        if c:
            return k
    raise ZeroDivisionError("zero polynomial has no finite order")


@dataclass(frozen=True)
class QScalar:
    """Rational function in q over the rationals, in canonical form."""

    scale: Fraction
    num: tuple[int, ...]
    den: tuple[int, ...]

    @staticmethod
    def _make(scale: Fraction, num, den) -> "QScalar":
        num = _trim(num)
        den = _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if scale == 0 or not num:
            return QScalar(Fraction(0), (), (1,))
        shift = min(_iorder(num), _iorder(den))
        if shift:
            num = num[shift:]
            den = den[shift:]
        cn, cd = _content(num), _content(den)
        sign = (-1 if num[-1] < 0 else 1) * (-1 if den[-1] < 0 else 1)
        scale = scale * Fraction(sign * cn, cd)
        num = _primitive(num)
        den = _primitive(den)
        if len(den) > 1 and len(num) > 1:
            g = _igcd_poly(num, den)
            if len(g) > 1:
                num = _idivexact(num, g)
                den = _idivexact(den, g)
        return QScalar(scale, num, den)

    @staticmethod
    def of(num, den=(1,)) -> "QScalar":
        """Build from rational coefficient sequences, lowest degree first."""
        num = [frac(c) for c in num]
        den = [frac(c) for c in den]
        from math import lcm

        mn = lcm(*[c.denominator for c in num]) if num else 1
        md = lcm(*[c.denominator for c in den]) if den else 1
        return QScalar._make(
            Fraction(md, mn),
            [int(c * mn) for c in num],
            [int(c * md) for c in den],
        )

    @staticmethod
    def const(x) -> "QScalar":
        return QScalar._make(frac(x), (1,), (1,))

    @staticmethod
    @lru_cache(maxsize=None)
    def q_power(k: int) -> "QScalar":
        if k >= 0:
            return QScalar(Fraction(1), (0,) * k + (1,), (1,))
        return QScalar(Fraction(1), (1,), (0,) * (-k) + (1,))

    @property
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return not self.is_zero

    def __add__(self, other: "QScalar") -> "QScalar":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.den == other.den:
            p, q = self.scale, other.scale
            d = Fraction(gcd(p.numerator * q.denominator, q.numerator * p.denominator),
                         p.denominator * q.denominator)
            num = _iadd(
                _iscale(self.num, (self.scale / d).numerator),
                _iscale(other.num, (other.scale / d).numerator),
            )
            return QScalar._make(d, num, self.den)
        common = Fraction(1, self.scale.denominator * other.scale.denominator)
        a = _iscale(_imul(self.num, other.den),
                    (self.scale / common).numerator)
        b = _iscale(_imul(other.num, self.den),
                    (other.scale / common).numerator)
        return QScalar._make(common, _iadd(a, b), _imul(self.den, other.den))

    def __sub__(self, other: "QScalar") -> "QScalar":
        return self + (-other)

    def __neg__(self) -> "QScalar":
        return QScalar(-self.scale, self.num, self.den)

    def __mul__(self, other: "QScalar") -> "QScalar":
        if self.is_zero or other.is_zero:
            return Q_ZERO
        return QScalar._make(
            self.scale * other.scale,
            _imul(self.num, other.num),
            _imul(self.den, other.den),
        )

    def __truediv__(self, other: "QScalar") -> "QScalar":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        if self.is_zero:
            return Q_ZERO
        return QScalar._make(
            self.scale / other.scale,
            _imul(self.num, other.den),
            _imul(self.den, other.num),
        )

    def valuation(self) -> int | None:
        """Order at the origin; None for the zero function."""
        if self.is_zero:
            return None
        return _iorder(self.num) - _iorder(self.den)

    @property
    def regular_at_zero(self) -> bool:
        v = self.valuation()
        return v is None or v >= 0

    def at_zero(self) -> Fraction:
        """Exact value at the origin; defined when the valuation allows it."""
        v = self.valuation()
        if v is None:
            return Fraction(0)
        if v < 0:
            raise ZeroDivisionError("pole at the origin")
        if v > 0:
            return Fraction(0)
        return self.scale * Fraction(self.num[_iorder(self.num)],
                                     self.den[_iorder(self.den)])

    def bar(self) -> "QScalar":
        """Substitute the inverse variable and clear denominators."""
        if self.is_zero:
            return self
        n, d = len(self.num), len(self.den)
        num = tuple(reversed(self.num))
        den = tuple(reversed(self.den))
        if n >= d:
            den = (0,) * (n - d) + den
        else:
            num = (0,) * (d - n) + num
        return QScalar._make(self.scale, num, den)

    def is_laurent(self) -> bool:
        """True when the denominator is a single power of the variable."""
        return sum(1 for c in self.den if c != 0) == 1

    def coeffs(self):
        """Rational coefficient tuples (num, den) for display and tests."""
        return (
            tuple(self.scale * c for c in self.num),
            tuple(Fraction(c) for c in self.den),
        )

    def __repr__(self):
        if self.is_zero:
            return "QScalar(0)"

        def poly(cs):
            terms = []
            for k, c in enumerate(cs):
                if c == 0:
                    continue
                if k == 0:
                    terms.append(str(c))
                elif k == 1:
                    terms.append("%s*q" % c if c != 1 else "q")
                else:
                    terms.append("%s*q^%d" % (c, k) if c != 1 else "q^%d" % k)
            return " + ".join(terms) or "0"

        scaled = [self.scale * c for c in self.num]
        if self.den == (1,):
            return "QScalar(%s)" % poly(scaled)
        return "QScalar((%s)/(%s))" % (poly(scaled), poly(self.den))


Q_ZERO = QScalar(Fraction(0), (), (1,))
Q_ONE = QScalar(Fraction(1), (1,), (1,))


@lru_cache(maxsize=None)
def qint(m: int) -> QScalar:
    """Balanced integer: (q^m - q^-m)/(q - q^-1)."""
    if m < 0:
        raise ValueError("negative argument")
    return (QScalar.q_power(m) - QScalar.q_power(-m)) / (
        QScalar.q_power(1) - QScalar.q_power(-1)
    )


@lru_cache(maxsize=None)
def qfact(m: int) -> QScalar:
    if m < 0:
        raise ValueError("negative argument")
    if m == 0:
        return Q_ONE
    return qfact(m - 1) * qint(m)


def qbinom(m: int, n: int) -> QScalar:
    if not m >= n >= 0:
        raise ValueError("binomial needs m >= n >= 0")
    return qfact(m) / (qfact(n) * qfact(m - n))
