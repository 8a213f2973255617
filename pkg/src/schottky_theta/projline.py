"""The projective line over a local field: points, Moebius maps, balls,
cross-ratios and degree-zero divisors.

A ball is stored by a center, a radius valuation r (radius = p^-r) and two
flags.  The four kinds are

    complement=False, closed=False   B(a, r)        v(z-a) >  r
    complement=False, closed=True    B(a, r)+       v(z-a) >= r
    complement=True,  closed=False   P1 - B(a, r)+  v(z-a) <  r, plus infinity
    complement=True,  closed=True    P1 - B(a, r)   v(z-a) <= r, plus infinity

so that set complement toggles both flags and closure sets closed=True.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .localfield import FieldDescriptor, LocalFieldElement, parse_rational_literal


class _Infinity:
    """The distinguished point at infinity of P1."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INFINITY = _Infinity()

ProjPoint = Union[LocalFieldElement, _Infinity]


def is_infinity(z) -> bool:
    return z is INFINITY


def points_equal(z: ProjPoint, w: ProjPoint) -> bool:
    if z is INFINITY or w is INFINITY:
        return z is w
    return z == w


class BoundaryPoleError(ValueError):
    """The pole of a Moebius map lies exactly on the boundary sphere of a
    ball, where the image is not reported as a ball."""


class UndefinedCrossRatioError(ZeroDivisionError):
    """A cross-ratio pattern where a zero rule and the matching infinity rule
    collide; the caller must move to representatives with distinct points."""


class Moebius:
    """An invertible map z -> (a z + b)/(c z + d) on P1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d
        if self.det().is_zero():
            raise ValueError("matrix is singular to working precision")

    @classmethod
    def from_rationals(cls, desc: FieldDescriptor, rows: Sequence[Sequence], prec: int) -> "Moebius":
        (a, b), (c, d) = rows
        return cls(*(desc.from_fraction(Fraction(t), prec) for t in (a, b, c, d)))

    def det(self) -> LocalFieldElement:
        return self.a * self.d - self.b * self.c

    def trace(self) -> LocalFieldElement:
        return self.a + self.d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "Moebius") -> "Moebius":
        return Moebius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Moebius":
        # adjugate; in PGL2 the determinant scalar is immaterial
        return Moebius(self.d, -self.b, -self.c, self.a)

    def apply(self, z: ProjPoint) -> ProjPoint:
        if z is INFINITY:
            if self.c.is_zero():
                return INFINITY
            return self.a / self.c
        num = self.a * z + self.b
        den = self.c * z + self.d
        if den.is_zero():
            return INFINITY
        return num / den

    __call__ = apply

    def pole(self) -> ProjPoint:
        """The preimage of infinity."""
        if self.c.is_zero():
            return INFINITY
        return -(self.d / self.c)

    def derivative_factor(self, z: ProjPoint) -> LocalFieldElement:
        """g'(z) for finite z off the pole; the c^-2 normal form at infinity."""
        det = self.det()
        if z is INFINITY:
            if self.c.is_zero():
                raise ZeroDivisionError("affine map has no derivative factor at infinity")
            return det / (self.c * self.c)
        den = self.c * z + self.d
        if den.is_zero():
            raise ZeroDivisionError("derivative at the pole")
        return det / (den * den)

    def proj_equal(self, other: "Moebius") -> bool:
        """Equality in PGL2 (rows proportional to working precision)."""
        u = self.entries()
        v = other.entries()
        for i in range(4):
            for j in range(i + 1, 4):
                if not (u[i] * v[j] == u[j] * v[i]):
                    return False
        return True

    def scaled(self, s) -> "Moebius":
        return Moebius(self.a * s, self.b * s, self.c * s, self.d * s)

    def __repr__(self):
        return f"Moebius[[{self.a!r}, {self.b!r}], [{self.c!r}, {self.d!r}]]"


def identity_moebius(desc: FieldDescriptor, prec: int) -> Moebius:
    one = desc.one(prec)
    zero = desc.from_int(0, prec)
    return Moebius(one, zero, zero, one)


class Ball:
    """One of the four kinds of balls of P1, radius p^-radius_val."""

    __slots__ = ("center", "radius_val", "complement", "closed", "center_fraction")

    def __init__(
        self,
        center: LocalFieldElement,
        radius_val,
        complement=False,
        closed=False,
        center_fraction=None,
    ):
        self.center = center
        self.radius_val = Fraction(radius_val)
        self.complement = complement
        self.closed = closed
        self.center_fraction = center_fraction  # exact value, when known

    # -- derived balls --------------------------------------------------------

    def closure(self) -> "Ball":
        return Ball(self.center, self.radius_val, self.complement, True, self.center_fraction)

    def interior(self) -> "Ball":
        return Ball(self.center, self.radius_val, self.complement, False, self.center_fraction)

    def set_complement(self) -> "Ball":
        return Ball(
            self.center, self.radius_val, not self.complement, not self.closed, self.center_fraction
        )

    @property
    def is_proper(self) -> bool:
        return not self.complement

    # -- membership -----------------------------------------------------------

    def contains(self, z: ProjPoint) -> bool:
        if z is INFINITY:
            return self.complement
        v = (z - self.center).valuation()
        r = self.radius_val
        if self.complement:
            return v < r if not self.closed else v <= r
        return v > r if not self.closed else v >= r

    __contains__ = contains

    def on_boundary(self, z: ProjPoint) -> bool:
        if z is INFINITY:
            return False
        return (z - self.center).valuation() == self.radius_val

    def boundary_point(self, unit=None) -> LocalFieldElement:
        """center + unit * pi^(e r): a deterministic point on the sphere."""
        desc = self.center.desc
        kexp = int(self.radius_val * desc.e)
        if kexp != self.radius_val * desc.e:
            raise ValueError("radius valuation is not attained in this field")
        pi = desc.uniformizer(self.center.prec_pi)
        step = pi**kexp if unit is None else pi**kexp * unit
        return self.center + step

    # -- relations ------------------------------------------------------------

    def equals(self, other: "Ball") -> bool:
        if self.complement != other.complement or self.closed != other.closed:
            return False
        if self.radius_val != other.radius_val:
            return False
        v = (self.center - other.center).valuation()
        # closed disks absorb centers on the sphere, open ones do not;
        # complement balls follow their complementary disk
        disk_closed = self.closed if not self.complement else not self.closed
        return v >= self.radius_val if disk_closed else v > self.radius_val

    __eq__ = equals
    __hash__ = None

    def __repr__(self):
        return ball_to_text(self)


def balls_disjoint(A: Ball, B: Ball) -> bool:
    """Set disjointness, exact in valuation arithmetic."""
    if A.complement and B.complement:
        return False  # both contain infinity
    if B.complement:
        A, B = B, A
    if A.complement:
        # A misses exactly one disk D around A.center; A and B are disjoint
        # iff the disk B is contained in D
        r = A.radius_val
        s = B.radius_val
        v = (A.center - B.center).valuation()
        if A.closed:
            # A = P1 - B(a, r): D is the open disk v > r
            return v > r and (s > r if B.closed else s >= r)
        # A = P1 - B(a, r)+: D is the closed disk v >= r
        return v >= r and s >= r
    # two proper disks: they intersect iff one contains the other's center
    v = (A.center - B.center).valuation()
    in_A = v >= A.radius_val if A.closed else v > A.radius_val
    in_B = v >= B.radius_val if B.closed else v > B.radius_val
    return not in_A and not in_B


def ball_image(g: Moebius, B: Ball) -> Ball:
    """The image g(B), again a ball of one of the four kinds.

    Raises BoundaryPoleError when the pole of g lies exactly on the boundary
    sphere of a proper disk.
    """
    if B.complement:
        return ball_image(g, B.set_complement()).set_complement()
    pole = g.pole()
    if pole is INFINITY:
        pole_position = -1  # affine map: the pole is never in a proper disk
    else:
        v = (pole - B.center).valuation()
        if v == B.radius_val:
            raise BoundaryPoleError(
                "pole of the map lies on the boundary sphere of the ball"
            )
        pole_position = 1 if v > B.radius_val else -1
    if pole_position < 0:
        gP = g(B.center)
        scale = g.derivative_factor(B.center)
        return Ball(gP, B.radius_val + scale.valuation(), False, B.closed)
    # pole inside: the image is the complement of a disk around g(infinity)
    ginf = g(INFINITY)
    scale = g.derivative_factor(INFINITY)
    rv = scale.valuation() - B.radius_val
    return Ball(ginf, rv, True, B.closed)


# -- textual ball format ------------------------------------------------------

_BALL_RE = re.compile(
    r"^\s*(P1\s*-\s*)?B\(\s*([^,]+?)\s*,\s*(\d+)\^(-?\d+(?:/\d+)?)\s*\)\s*(\+?)\s*$"
)


def ball_to_text(B: Ball) -> str:
    desc = B.center.desc
    c = B.center
    cv = c.valuation()
    if c.is_zero():
        ctext = "0"
    else:
        ctext = c.expansion_str(4)
        ctext = ctext.split(" + O")[0]
        if len(ctext) > 24:
            ctext = ctext[:24] + "..."
    rv = B.radius_val
    rtext = f"{desc.p}^{-rv}"
    if B.complement:
        inner_plus = "" if B.closed else "+"
        return f"P1 - B({ctext}, {rtext}){inner_plus}"
    return f"B({ctext}, {rtext})" + ("+" if B.closed else "")


def parse_ball(text: str, desc: FieldDescriptor, prec: int) -> Ball:
    m = _BALL_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse ball: {text!r}")
    complement = bool(m.group(1))
    cfrac = parse_rational_literal(m.group(2), desc.p)
    center = desc.from_fraction(cfrac, prec)
    if int(m.group(3)) != desc.p:
        raise ValueError(f"radius base {m.group(3)} does not match p={desc.p}")
    rv = -Fraction(m.group(4))
    plus = bool(m.group(5))
    if complement:
        # P1 - B(c, r)+ removes a closed disk, leaving an open ball
        return Ball(center, rv, True, not plus, cfrac)
    return Ball(center, rv, False, plus, cfrac)


# -- cross-ratio and divisors -------------------------------------------------


def cross_ratio(z: ProjPoint, w: ProjPoint, a: ProjPoint, b: ProjPoint) -> ProjPoint:
    """(z - a)(w - b) / ((z - b)(w - a)), extended to coincidences and infinity.

    Coincidence rules: (z,z;a,b) = (z,w;a,a) = 1 (a zero divisor on one side),
    (z,w;z,b) = (z,w;a,w) = 0 and (z,w;a,z) = (z,w;w,b) = infinity.  When both
    a zero rule and an infinity rule would apply the value is undefined.
    """
    if points_equal(z, w) or points_equal(a, b):
        return _one_like(z, w, a, b)
    zero_rule = points_equal(z, a) or points_equal(w, b)
    inf_rule = points_equal(z, b) or points_equal(w, a)
    if zero_rule and inf_rule:
        raise UndefinedCrossRatioError("cross-ratio undefined: shared point pattern")
    if (points_equal(z, a) and points_equal(w, b)) or (
        points_equal(z, b) and points_equal(w, a)
    ):
        raise UndefinedCrossRatioError(
            "cross-ratio undefined: both pairs coincide; use distinct base points"
        )
    if zero_rule:
        return _zero_like(z, w, a, b)
    if inf_rule:
        return INFINITY
    # at most one of the four slots is infinity here
    if z is INFINITY:
        return (w - b) / (w - a)
    if w is INFINITY:
        return (z - a) / (z - b)
    if a is INFINITY:
        return (w - b) / (z - b)
    if b is INFINITY:
        return (z - a) / (w - a)
    return ((z - a) * (w - b)) / ((z - b) * (w - a))


def _first_elt(*pts):
    for t in pts:
        if t is not INFINITY:
            return t
    raise ValueError("no finite point available")


def _one_like(*pts):
    t = _first_elt(*pts)
    return t.desc.one(t.prec_pi)


def _zero_like(*pts):
    t = _first_elt(*pts)
    return t.desc.from_int(0, t.prec_pi)


class Divisor0:
    """A degree-zero divisor on P1 with pairwise distinct support points."""

    __slots__ = ("pairs",)

    def __init__(self, pairs: Iterable):
        merged: list = []
        for point, mult in pairs:
            mult = int(mult)
            if mult == 0:
                continue
            for i, (q, m) in enumerate(merged):
                if points_equal(point, q):
                    merged[i] = (q, m + mult)
                    break
            else:
                merged.append((point, mult))
        self.pairs = [(q, m) for q, m in merged if m != 0]
        if sum(m for _, m in self.pairs) != 0:
            raise ValueError("divisor has nonzero degree")

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def degree(self) -> int:
        return sum(m for _, m in self.pairs)

    def __eq__(self, other):
        if not isinstance(other, Divisor0) or len(self) != len(other):
            return NotImplemented if not isinstance(other, Divisor0) else False
        for q, m in self.pairs:
            if not any(points_equal(q, r) and m == n for r, n in other.pairs):
                return False
        return True

    __hash__ = None

    def support(self):
        return [q for q, _ in self.pairs]

    def finite_support(self):
        return [q for q, _ in self.pairs if q is not INFINITY]

    def contains_infinity(self) -> bool:
        return any(q is INFINITY for q, _ in self.pairs)

    def __neg__(self):
        return Divisor0((q, -m) for q, m in self.pairs)

    def __add__(self, other: "Divisor0"):
        return Divisor0(list(self.pairs) + list(other.pairs))

    def translate(self, g: Moebius) -> "Divisor0":
        return Divisor0((g(q), m) for q, m in self.pairs)

    def supports_disjoint(self, other: "Divisor0") -> bool:
        return not any(
            points_equal(q, r) for q, _ in self.pairs for r, _ in other.pairs
        )

    def __repr__(self):
        def short(q):
            if q is INFINITY:
                return "inf"
            s = q.expansion_str(3).split(" + O")[0]
            return s if len(s) <= 18 else s[:18] + "..."

        return " + ".join(f"{m}*({short(q)})" for q, m in self.pairs) or "0"


def elementary_pairs(D: Divisor0):
    """Decompose D into elementary (a) - (b) pieces (a list of point pairs)."""
    pos = []
    neg = []
    for q, m in D.pairs:
        (pos if m > 0 else neg).extend([q] * abs(m))
    assert len(pos) == len(neg)
    return list(zip(pos, neg))


def pair_divisors(D: Divisor0, E: Divisor0) -> LocalFieldElement:
    """The multiplicative pairing prod (P - Q)^(m_P n_Q) over finite points.

    Factors involving infinity drop out because both divisors have degree
    zero.  Requires disjoint supports.
    """
    if not D.supports_disjoint(E):
        raise UndefinedCrossRatioError("divisor supports overlap")
    out = None
    for P, m in D.pairs:
        if P is INFINITY:
            continue
        for Q, n in E.pairs:
            if Q is INFINITY:
                continue
            f = (P - Q) ** (m * n)
            out = f if out is None else out * f
    if out is None:
        q = _first_elt(*(D.support() + E.support()))
        return q.desc.one(q.prec_pi)
    return out
