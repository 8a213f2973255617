"""Truncated power series on the closed unit ball of an unramified field.

A series is stored as integer coefficient residues mod p^digits together with
a degree cap and a ``tail`` exponent: the true function it stands for differs
from the stored polynomial by a series of sup norm at most p^-tail on
B(0,1+).  On that ball the sup norm equals the Gauss norm (the largest
coefficient absolute value), so the tail bound is also a coefficient-wise
guarantee.  All bookkeeping is exact integer arithmetic; no floats.

Multiplication packs both coefficient lists into single big integers with
enough bit headroom per block that one machine multiply performs the whole
convolution (Kronecker substitution).  Composition with a fixed unit-ball map
is a linear map of the coefficients, so its power table is built once and
reused.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence

from .localfield import FieldDescriptor, LocalFieldElement


class NotUnitBallMapError(ValueError):
    """The map does not send the closed unit ball into itself."""


def _vp(n: int, p: int):
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class TateSeries:
    __slots__ = ("p", "digits", "pmod", "cap", "coeffs", "tail")

    def __init__(self, p: int, digits: int, cap: int, coeffs: Sequence[int], tail=math.inf):
        self.p = p
        self.digits = digits
        self.pmod = p**digits
        self.cap = cap
        cs = [c % self.pmod for c in coeffs[: cap + 1]]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs
        self.tail = tail

    # -- constructors ---------------------------------------------------------

    @classmethod
    def one(cls, p: int, digits: int, cap: int) -> "TateSeries":
        return cls(p, digits, cap, [1])

    @classmethod
    def constant(cls, p: int, digits: int, cap: int, c: int) -> "TateSeries":
        return cls(p, digits, cap, [c])

    # -- inspection -----------------------------------------------------------

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if k < len(self.coeffs) else 0

    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else 0

    def gauss_val(self):
        """Valuation of the largest coefficient (the Gauss norm exponent)."""
        if not self.coeffs:
            return math.inf
        return min(_vp(c, self.p) for c in self.coeffs)

    def dist_to_one_val(self):
        """Valuation of the sup norm of (self - 1); large means close to 1."""
        best = _vp((self.coeff(0) - 1) % self.pmod, self.p)
        for c in self.coeffs[1:]:
            v = _vp(c, self.p)
            if v < best:
                best = v
        return min(best, self.tail)

    def _suffix_min_vals(self) -> List:
        """suffix[i] = min valuation of coefficients of degree >= i."""
        out = [math.inf] * (len(self.coeffs) + 1)
        for i in range(len(self.coeffs) - 1, -1, -1):
            out[i] = min(out[i + 1], _vp(self.coeffs[i], self.p))
        return out

    def _compat(self, other: "TateSeries"):
        if self.p != other.p or self.digits != other.digits or self.cap != other.cap:
            raise ValueError("series live in different truncated rings")

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: "TateSeries") -> "TateSeries":
        self._compat(other)
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [(self.coeff(k) + other.coeff(k)) % self.pmod for k in range(n)]
        return TateSeries(self.p, self.digits, self.cap, cs, min(self.tail, other.tail))

    def __sub__(self, other: "TateSeries") -> "TateSeries":
        self._compat(other)
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [(self.coeff(k) - other.coeff(k)) % self.pmod for k in range(n)]
        return TateSeries(self.p, self.digits, self.cap, cs, min(self.tail, other.tail))

    def scale(self, c: int) -> "TateSeries":
        return TateSeries(
            self.p, self.digits, self.cap, [c * a for a in self.coeffs], self.tail
        )

    def __mul__(self, other: "TateSeries") -> "TateSeries":
        self._compat(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return TateSeries(self.p, self.digits, self.cap, [], min(self.tail, other.tail))
        blockbits = (self.pmod * self.pmod * min(len(a), len(b))).bit_length() + 1
        prod = _pack(a, blockbits) * _pack(b, blockbits)
        cs = _unpack(prod, blockbits, len(a) + len(b) - 1)
        # sup-norm error budget: each factor's tail scaled by the other's
        # Gauss norm, plus whatever the degree cap drops
        ga, gb = self.gauss_val(), other.gauss_val()
        tail = min(self.tail + gb, other.tail + ga, self.tail + other.tail)
        if len(cs) - 1 > self.cap:
            tail = min(tail, _dropped_degree_val(self, other))
        return TateSeries(self.p, self.digits, self.cap, cs, tail)

    def derivative(self) -> "TateSeries":
        cs = [(k * self.coeffs[k]) % self.pmod for k in range(1, len(self.coeffs))]
        return TateSeries(self.p, self.digits, self.cap, cs, self.tail)

    # -- analytic operations --------------------------------------------------

    def eval(self, t: LocalFieldElement) -> LocalFieldElement:
        if t.valuation() < 0:
            raise ValueError("evaluation point lies outside the closed unit ball")
        desc = t.desc
        acc = desc.from_int(0, t.precision())
        for c in reversed(self.coeffs):
            acc = acc * t + desc.from_int(c, t.precision())
        return acc

    def eval_desc(self, desc: FieldDescriptor, nprec: int) -> LocalFieldElement:
        """The constant term as a field element (evaluation at 0)."""
        return desc.from_int(self.coeff(0), nprec)

    def compose(self, inner: "TateSeries") -> "TateSeries":
        """self(inner(t)) by Horner.

        Residue coefficients always have valuation >= 0, so any representable
        inner series maps the closed unit ball into itself.
        """
        self._compat(inner)
        out = TateSeries.constant(self.p, self.digits, self.cap, self.coeff(self.degree()))
        for k in range(self.degree() - 1, -1, -1):
            out = out * inner
            out = out + TateSeries.constant(self.p, self.digits, self.cap, self.coeff(k))
        return TateSeries(
            self.p, self.digits, self.cap, out.coeffs, min(out.tail, self.tail, inner.tail)
        )

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:4])
        more = ", ..." if len(self.coeffs) > 4 else ""
        return f"TateSeries(p={self.p}, digits={self.digits}, [{head}{more}], tail={self.tail})"


def _pack(coeffs: Sequence[int], blockbits: int) -> int:
    out = 0
    for c in reversed(coeffs):
        out = (out << blockbits) | c
    return out


def _unpack(big: int, blockbits: int, count: int) -> List[int]:
    mask = (1 << blockbits) - 1
    out = []
    for _ in range(count):
        out.append(big & mask)
        big >>= blockbits
    return out


def _dropped_degree_val(A: TateSeries, B: TateSeries):
    """Least possible valuation among product coefficients beyond the cap."""
    sb = B._suffix_min_vals()
    cap = A.cap
    best = math.inf
    for i, c in enumerate(A.coeffs):
        j = cap + 1 - i
        if j < 0:
            j = 0
        if j >= len(sb):
            continue
        v = _vp(c, A.p) + sb[j]
        if v < best:
            best = v
    return best


# -- expansions of fractional linear maps -------------------------------------


def moebius_coefficient_data(a, b, c, d):
    """Exact residue data for (a t + b)/(c t + d) on the closed unit ball.

    Returns (s, r, q) with the series equal to (r t + s) * sum (-q)^k t^k,
    as field elements; requires v(q) = v(c/d) >= 1 so the pole -d/c lies
    strictly outside the ball.
    """
    if d.is_zero():
        raise NotUnitBallMapError("pole of the map at 0")
    q = c / d
    if q.valuation() < 1:
        raise NotUnitBallMapError("pole of the map inside or on the closed unit ball")
    return b / d, a / d, q


def moebius_to_unit_series(a, b, c, d, digits: int, cap: int) -> TateSeries:
    """Expansion of (a t + b)/(c t + d) with sup norm at most 1, verified.

    Coefficients: alpha_0 = b/d, alpha_k = (-q)^(k-1) (r - s q) with q = c/d,
    r = a/d, s = b/d.  The dropped tail beyond the cap has valuation at least
    (cap) v(q) + v(r - s q).
    """
    s, r, q = moebius_coefficient_data(a, b, c, d)
    desc = a.desc
    if desc.e != 1:
        raise NotImplementedError("series expansions are supported for unramified fields only")
    p = desc.p
    if s.valuation() < 0:
        raise NotUnitBallMapError("constant term outside the unit ball")
    lead = r - s * q
    vq = q.valuation()
    vlead = lead.valuation()
    if vlead < 0:
        raise NotUnitBallMapError("series sup norm exceeds 1")
    pmod = p**digits
    coeffs = [0] * (cap + 1)
    coeffs[0] = s.integer_rep(digits)
    mq = (-q).integer_rep(digits)
    step = lead.integer_rep(digits)
    for k in range(1, cap + 1):
        coeffs[k] = step
        step = step * mq % pmod
    tail = cap * vq + vlead
    return TateSeries(p, digits, cap, coeffs, min(tail, math.inf))


# -- composition power tables -------------------------------------------------


class CompositionTable:
    """Precomputed powers of a fixed inner series, packed for fast reuse.

    Composing G with the inner map is the linear map  G -> sum_k G_k * inner^k,
    so with the powers packed into big integers each composition costs one
    scalar-by-bigint multiply per coefficient of G.
    """

    def __init__(self, inner: TateSeries, terms: Optional[int] = None):
        self.p = inner.p
        self.digits = inner.digits
        self.pmod = inner.pmod
        self.cap = inner.cap
        n = self.cap if terms is None else terms
        self.terms = n
        self.blockbits = (self.pmod * self.pmod * (n + 1)).bit_length() + 1
        powers: List[TateSeries] = [TateSeries.one(self.p, self.digits, self.cap)]
        for _ in range(n):
            powers.append(powers[-1] * inner)
        self.packed = [_pack(P.coeffs, self.blockbits) for P in powers]
        self.lengths = [len(P.coeffs) for P in powers]
        self.tail = min(P.tail for P in powers)

    def compose(self, G: TateSeries) -> TateSeries:
        if G.p != self.p or G.digits != self.digits or G.cap != self.cap:
            raise ValueError("series does not match the table ring")
        if G.degree() > self.terms:
            raise ValueError("series degree exceeds the table size")
        acc = 0
        for k, a in enumerate(G.coeffs):
            if a:
                acc += a * self.packed[k]
        cs = _unpack(acc, self.blockbits, self.cap + 1)
        return TateSeries(self.p, self.digits, self.cap, cs, min(G.tail, self.tail))
