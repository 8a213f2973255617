"""Capped-precision arithmetic in Q_p and in a quadratic Eisenstein extension.

An element is kept in the normal form pi^k * u, with u a unit of the ring of
integers stored as an exact integer (a pair of integers for a ramified
quadratic extension pi^2 = c*p), together with an absolute precision cap:
the element is known modulo pi^N and nothing more is ever claimed.

Valuations are exact rationals normalized so that v(p) = 1, hence
v(pi) = 1/e.  Absolute precision is stored internally as an integer count of
pi-digits; the public accessors convert to the v(p) = 1 normalization.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Rational = Union[int, Fraction]

DEFAULT_GUARD_DIGITS = 10


class PrecisionError(ArithmeticError):
    """An operation needs more precision than its operands carry."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % q == 0:
            return n == q
    i = 37
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _vp(n: int, p: int) -> int:
    """Exact p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_fraction(r: Rational, p: int) -> int:
    """Exact p-adic valuation of a nonzero rational."""
    r = Fraction(r)
    return _vp(r.numerator, p) - _vp(r.denominator, p)


_LIT_INT = re.compile(r"^[+-]?\d+$")
_LIT_FRAC = re.compile(r"^([+-]?\d+)\s*/\s*(\d+)$")
_LIT_POW = re.compile(r"^([+-]?\d+)\s*\*\s*(\d+)\s*\^\s*([+-]?\d+)$")


def parse_rational_literal(text: str, p: int | None = None) -> Fraction:
    """Parse "num/den", "m*p^k" or a plain integer into a Fraction.

    When ``p`` is given, the base of a power literal must match it.
    """
    s = text.strip()
    if _LIT_INT.match(s):
        return Fraction(int(s))
    m = _LIT_FRAC.match(s)
    if m:
        return Fraction(int(m.group(1)), int(m.group(2)))
    m = _LIT_POW.match(s)
    if m:
        base = int(m.group(2))
        if p is not None and base != p:
            raise ValueError(f"power literal base {base} does not match p={p}")
        return Fraction(int(m.group(1))) * Fraction(base) ** int(m.group(3))
    raise ValueError(f"cannot parse rational literal: {text!r}")


@lru_cache(maxsize=None)
def _pow_p(p: int, n: int) -> int:
    return p**n


@dataclass(frozen=True)
class FieldDescriptor:
    """Base field data: Q_p for e=1, or Q_p(pi) with pi^2 = c*p for e=2.

    ``eisenstein_unit`` is the rational unit c; it must be prime to p.
    """

    p: int
    e: int = 1
    eisenstein_unit: Fraction | None = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e not in (1, 2):
            raise ValueError("only e = 1 or a quadratic Eisenstein extension (e = 2)")
        if self.e == 2:
            c = self.eisenstein_unit
            if c is None:
                object.__setattr__(self, "eisenstein_unit", Fraction(1))
            else:
                c = Fraction(c)
                if c.numerator % self.p == 0 or c.denominator % self.p == 0:
                    raise ValueError("eisenstein_unit must be a p-adic unit")
                object.__setattr__(self, "eisenstein_unit", c)
        elif self.eisenstein_unit is not None:
            raise ValueError("eisenstein_unit only makes sense for e = 2")

    # -- element constructors -------------------------------------------------

    def from_fraction(self, r: Rational, prec: int) -> "LocalFieldElement":
        """Image of an exact rational, known modulo pi^prec.

        ``prec`` counts pi-digits.  The valuation of the result is exact.
        """
        r = Fraction(r)
        if r == 0:
            return LocalFieldElement(self, 0, None, prec)
        vnum = _vp(r.numerator, self.p)
        vden = _vp(r.denominator, self.p)
        k = self.e * (vnum - vden)
        if k >= prec:
            return LocalFieldElement(self, prec, 0, prec)
        num = r.numerator // _pow_p(self.p, vnum)
        den = r.denominator // _pow_p(self.p, vden)
        rel = prec - k
        digits = -(-rel // self.e)  # ceil(rel / e) p-digits of the unit part
        mod = _pow_p(self.p, digits)
        u = num * pow(den, -1, mod) % mod
        if self.e == 1:
            unit = u
        else:
            # p = pi^2 / c, so stripping p^(k/2) leaves a spurious c^(k/2)
            w = vnum - vden
            cfix = self._c_inv_mod(digits) if w >= 0 else self._c_mod(digits)
            u = u * pow(cfix, abs(w), mod) % mod
            unit = (u, 0)
        return _normalized(self, k, unit, prec)

    def from_rational(self, num: int, den: int, prec: int) -> "LocalFieldElement":
        return self.from_fraction(Fraction(num, den), prec)

    def from_int(self, n: int, prec: int) -> "LocalFieldElement":
        return self.from_fraction(Fraction(n), prec)

    def parse(self, text: str, prec: int) -> "LocalFieldElement":
        return self.from_fraction(parse_rational_literal(text, self.p), prec)

    def zero(self) -> "LocalFieldElement":
        return LocalFieldElement(self, 0, None, 0)

    def one(self, prec: int) -> "LocalFieldElement":
        return self.from_int(1, prec)

    def uniformizer(self, prec: int) -> "LocalFieldElement":
        if self.e == 1:
            return self.from_int(self.p, prec)
        return _normalized(self, 1, (1, 0), prec)

    # -- Eisenstein helpers ---------------------------------------------------

    def _c_mod(self, digits: int) -> int:
        c = self.eisenstein_unit
        mod = _pow_p(self.p, digits)
        return c.numerator * pow(c.denominator, -1, mod) % mod

    def _c_inv_mod(self, digits: int) -> int:
        c = self.eisenstein_unit
        mod = _pow_p(self.p, digits)
        return c.denominator * pow(c.numerator, -1, mod) % mod

    def __repr__(self):
        if self.e == 1:
            return f"Q_{self.p}"
        return f"Q_{self.p}(pi), pi^2 = {self.eisenstein_unit}*{self.p}"


def Qp(p: int) -> FieldDescriptor:
    return FieldDescriptor(p, 1)


def eisenstein(p: int, c: Rational = 1) -> FieldDescriptor:
    return FieldDescriptor(p, 2, Fraction(c))


# -- normalization ------------------------------------------------------------


def _normalized(desc, kexp, unit, nprec) -> "LocalFieldElement":
    """Bring a raw mantissa at pi-position kexp, known mod pi^nprec, to
    normal form: strip pi-powers into kexp and reduce the mantissa."""
    p = desc.p
    rel = nprec - kexp
    if rel <= 0:
        return LocalFieldElement(desc, nprec, 0, nprec)
    if desc.e == 1:
        m = unit % _pow_p(p, rel)
        if m == 0:
            return LocalFieldElement(desc, nprec, 0, nprec)
        s = _vp(m, p)
        if s:
            kexp += s
            rel -= s
            if rel <= 0:
                return LocalFieldElement(desc, nprec, 0, nprec)
            m = (m // _pow_p(p, s)) % _pow_p(p, rel)
            if m == 0:
                return LocalFieldElement(desc, nprec, 0, nprec)
        return LocalFieldElement(desc, kexp, m, nprec)
    # e == 2: unit = (a, b) for a + b*pi
    a, b = unit
    a %= _pow_p(p, (rel + 1) // 2)
    b %= _pow_p(p, rel // 2) if rel >= 2 else 1
    if a == 0 and b == 0:
        return LocalFieldElement(desc, nprec, 0, nprec)
    va = 2 * _vp(a, p) if a else rel + 2
    vb = 2 * _vp(b, p) + 1 if b else rel + 2
    s = min(va, vb)
    if s >= rel:
        return LocalFieldElement(desc, nprec, 0, nprec)
    if s:
        a, b = _unit2_shift_down(desc, a, b, s, (rel + 1) // 2)
        kexp += s
        rel -= s
        a %= _pow_p(p, (rel + 1) // 2)
        b %= _pow_p(p, rel // 2) if rel >= 2 else 1
    return LocalFieldElement(desc, kexp, (a, b), nprec)


def _unit2_shift_down(desc, a, b, s, work_digits):
    """Divide a + b*pi by pi^s (exactly divisible by construction)."""
    p = desc.p
    cinv = desc._c_inv_mod(work_digits + s)
    while s >= 2:
        t = s // 2
        q = _pow_p(p, t)
        a = (a // q) * pow(cinv, t, _pow_p(p, work_digits + s))
        b = (b // q) * pow(cinv, t, _pow_p(p, work_digits + s))
        s -= 2 * t
    if s == 1:
        # (a + b*pi)/pi = b + (a/(c*p))*pi
        a, b = b, (a // p) * cinv
    return a, b


def _unit2_shift_up(desc, a, b, s, work_digits):
    """Multiply a + b*pi by pi^s for s >= 0."""
    p = desc.p
    c = desc._c_mod(work_digits)
    if s % 2:
        a, b = b * c * p, a
        s -= 1
    if s:
        t = s // 2
        f = pow(c * p, t, _pow_p(p, work_digits + s))
        a, b = a * f, b * f
    return a, b


class LocalFieldElement:
    """One field element: pi^kexp * unit, known modulo pi^nprec.

    ``unit`` is None for the exact zero, the integer 0 for a value that is
    indistinguishable from zero at this precision, otherwise an exact unit
    mantissa (an int, or an (a, b) pair meaning a + b*pi when e = 2).
    """

    __slots__ = ("desc", "kexp", "unit", "nprec")

    def __init__(self, desc, kexp, unit, nprec):
        self.desc = desc
        self.kexp = kexp
        self.unit = unit
        self.nprec = nprec

    # -- predicates and accessors --------------------------------------------

    def is_exact_zero(self) -> bool:
        return self.unit is None

    def is_zero(self) -> bool:
        """True when nothing at this precision distinguishes self from 0."""
        return self.unit is None or self.unit == 0

    def valuation(self) -> Fraction | float:
        """Exact valuation (v(p) = 1).  math.inf for the exact zero; a
        zero-to-precision element reports its precision cap."""
        if self.unit is None:
            return math.inf
        return Fraction(self.kexp, self.desc.e)

    def precision(self) -> Fraction:
        return Fraction(self.nprec, self.desc.e)

    @property
    def prec_pi(self) -> int:
        return self.nprec

    def with_precision(self, nprec: int) -> "LocalFieldElement":
        """Forget digits beyond pi^nprec (never invents precision)."""
        if self.unit is None:
            return self
        if nprec >= self.nprec and self.unit != 0:
            return self
        if self.unit == 0:
            return LocalFieldElement(self.desc, min(self.nprec, nprec), 0, min(self.nprec, nprec))
        return _normalized(self.desc, self.kexp, self.unit, min(self.nprec, nprec))

    # -- coercion -------------------------------------------------------------

    def _coerce(self, other, nprec):
        if isinstance(other, LocalFieldElement):
            if other.desc != self.desc:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.desc.from_fraction(other, nprec)
        return None

    # -- ring operations ------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return LocalFieldElement(self.desc, 0, None, self.nprec)
            # exact scalar: keep the full relative precision of self
            k = self.desc.e * vp_fraction(other, self.desc.p)
            b = self.desc.from_fraction(other, k + max(self.nprec - self.kexp, 0) + self.desc.e)
        else:
            b = self._coerce(other, self.nprec)
            if b is None:
                return NotImplemented
        a = self
        if a.unit is None or b.unit is None:
            # an exact zero annihilates; all digits of the product are known
            return LocalFieldElement(self.desc, 0, None, max(a.nprec, b.nprec))
        if a.unit == 0 or b.unit == 0:
            # an inexact zero has kexp = nprec, so kexp sums give O(pi^(N+k))
            return LocalFieldElement(self.desc, a.kexp + b.kexp, 0, a.kexp + b.kexp)
        rel = min(a.nprec - a.kexp, b.nprec - b.kexp)
        k = a.kexp + b.kexp
        if self.desc.e == 1:
            m = a.unit * b.unit
        else:
            a1, b1 = a.unit
            a2, b2 = b.unit
            c = self.desc._c_mod((rel + 3) // 2)
            m = (a1 * a2 + b1 * b2 * c * self.desc.p, a1 * b2 + a2 * b1)
        return _normalized(self.desc, k, m, k + rel)

    __rmul__ = __mul__

    def _inverse_unit(self, rel):
        desc = self.desc
        p = desc.p
        if desc.e == 1:
            return pow(self.unit, -1, _pow_p(p, rel))
        a, b = self.unit
        digits = (rel + 3) // 2
        mod = _pow_p(p, digits)
        c = desc._c_mod(digits)
        n = (a * a - b * b * c * p) % mod
        ninv = pow(n, -1, mod)
        return (a * ninv % mod, (-b * ninv) % mod)

    def __truediv__(self, other):
        b = self._coerce(other, self.nprec)
        if b is None:
            return NotImplemented
        if isinstance(other, (int, Fraction)) and other != 0:
            k = self.desc.e * vp_fraction(other, self.desc.p)
            b = self.desc.from_fraction(other, k + (self.nprec - self.kexp) + self.desc.e)
        if b.unit is None:
            raise ZeroDivisionError("division by exact zero")
        if b.unit == 0:
            raise PrecisionError("division by a zero-to-precision element")
        if self.unit is None:
            return LocalFieldElement(self.desc, 0, None, max(self.nprec, b.nprec))
        if self.unit == 0:
            return LocalFieldElement(self.desc, self.kexp - b.kexp, 0, self.kexp - b.kexp)
        rel = min(self.nprec - self.kexp, b.nprec - b.kexp)
        binv = b._inverse_unit(rel)
        k = self.kexp - b.kexp
        if self.desc.e == 1:
            m = self.unit * binv
        else:
            a1, b1 = self.unit
            a2, b2 = binv
            c = self.desc._c_mod((rel + 3) // 2)
            m = (a1 * a2 + b1 * b2 * c * self.desc.p, a1 * b2 + a2 * b1)
        return _normalized(self.desc, k, m, k + rel)

    def __rtruediv__(self, other):
        b = self._coerce(other, self.nprec)
        if b is None:
            return NotImplemented
        return b / self

    def inverse(self):
        return 1 / self

    def __add__(self, other):
        b = self._coerce(other, self.nprec)
        if b is None:
            return NotImplemented
        a = self
        if a.unit is None:
            return b
        if b.unit is None:
            return a
        if a.unit == 0 or b.unit == 0:
            n = min(a.nprec if a.unit == 0 else 10**9, b.nprec if b.unit == 0 else 10**9)
            live = b if a.unit == 0 else a
            if live.unit == 0:
                return LocalFieldElement(self.desc, n, 0, n)
            return live.with_precision(n)
        n = min(a.nprec, b.nprec)
        k = min(a.kexp, b.kexp)
        if self.desc.e == 1:
            m = a.unit * _pow_p(self.desc.p, a.kexp - k) + b.unit * _pow_p(self.desc.p, b.kexp - k)
        else:
            wd = (n - k + 3) // 2
            a1, b1 = _unit2_shift_up(self.desc, *a.unit, a.kexp - k, wd)
            a2, b2 = _unit2_shift_up(self.desc, *b.unit, b.kexp - k, wd)
            m = (a1 + a2, b1 + b2)
        return _normalized(self.desc, k, m, n)

    __radd__ = __add__

    def __neg__(self):
        if self.unit is None or self.unit == 0:
            return self
        if self.desc.e == 1:
            m = -self.unit
        else:
            m = (-self.unit[0], -self.unit[1])
        return _normalized(self.desc, self.kexp, m, self.nprec)

    def __sub__(self, other):
        b = self._coerce(other, self.nprec)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        b = self._coerce(other, self.nprec)
        if b is None:
            return NotImplemented
        return b + (-self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return self.desc.one(max(self.nprec - self.kexp, self.desc.e))
        base = self if n > 0 else self.inverse()
        n = abs(n)
        out = None
        while n:
            if n & 1:
                out = base if out is None else out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        b = self._coerce(other, self.nprec)
        if b is None:
            return NotImplemented
        return (self - b).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    # -- integer representative (used by the series layer) --------------------

    def integer_rep(self, digits: int) -> int:
        """For e = 1 and v >= 0: the integer unit*p^kexp reduced mod p^digits."""
        if self.desc.e != 1:
            raise ValueError("integer_rep only for unramified descriptors")
        if self.unit is None or self.unit == 0:
            return 0
        if self.kexp < 0:
            raise ValueError("negative valuation has no integer representative")
        return (self.unit * _pow_p(self.desc.p, self.kexp)) % _pow_p(self.desc.p, digits)

    # -- printing -------------------------------------------------------------

    def expansion_str(self, max_terms: int = 18) -> str:
        """Digit expansion "a0 + a1*p + ... + O(p^N)" (component form for e=2)."""
        p = self.desc.p
        if self.unit is None:
            return "0"
        if self.desc.e == 2:
            a, b = (0, 0) if self.unit == 0 else self.unit
            return f"pi^{self.kexp}*({a} + {b}*pi) + O(pi^{self.nprec})"
        if self.unit == 0:
            return f"O({p}^{self.nprec})"
        terms = []
        m = self.unit
        j = self.kexp
        shown = 0
        while m and shown < max_terms:
            d = m % p
            if d:
                if j == 0:
                    terms.append(f"{d}")
                elif j == 1:
                    terms.append(f"{d}*{p}")
                else:
                    terms.append(f"{d}*{p}^{j}")
                shown += 1
            m //= p
            j += 1
        if m:
            terms.append("...")
        if not terms:
            terms.append("0")
        return " + ".join(terms) + f" + O({p}^{self.nprec})"

    def __repr__(self):
        return self.expansion_str(6)


def element_min_precision(*elts: LocalFieldElement) -> int:
    return min(e.nprec for e in elts)
