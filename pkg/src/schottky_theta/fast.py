"""Iterative theta computation through unit power series on frame coordinates.

Instead of multiplying one cross-ratio per group element, the product over
all words of a given length is carried as a tuple of unit power series, one
per ball, and extending the length by one letter is a fixed change of
variables followed by a product: polynomial work per step instead of
exponential.  The series for ball i lives in the coordinate t = tau_i(z)
that maps the complement of B_i onto the closed unit ball.

The chain for a target of m digits:

    reduce divisors to the domain closure  ->  truncation length nu from the
    contraction bounds  ->  series tuple accumulated over levels 2..nu  ->
    evaluate prefix * scalar * series at the support of D.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .bounds import BoundsData, compute_bounds, nu_for_target
from .localfield import DEFAULT_GUARD_DIGITS, LocalFieldElement, PrecisionError
from .naive import SupportCollisionError
from .projline import INFINITY, Divisor0, Moebius, ProjPoint, elementary_pairs
from .schottky import SchottkyGroup, Word
from .tate import CompositionTable, TateSeries, moebius_to_unit_series


class DivisorPositionError(ValueError):
    """Divisor support sits inside an open ball; reduce it first."""


class EvaluationDomainError(ValueError):
    """Evaluation point sits inside an open ball; reduce it first."""


class FrameInvariantError(RuntimeError):
    """A frame failed its defining checks; the group data is inconsistent."""


@dataclass
class Frame:
    index: int
    tau: Moebius
    tau_inv: Moebius
    center: LocalFieldElement
    anchor: LocalFieldElement
    tstar: LocalFieldElement        # tau(infinity), interior to the unit ball


@dataclass
class FrameSet:
    group: SchottkyGroup
    digits: int
    cap: int
    frames: Dict[int, Frame]
    tables: Dict[Tuple[int, int], CompositionTable]

    def tau(self, i: int) -> Moebius:
        return self.frames[i].tau


def build_frames(group: SchottkyGroup, digits: int, cap: Optional[int] = None) -> FrameSet:
    """Coordinates tau_i with tau_i(P1 - B_i) = B(0,1+), plus transition tables.

    tau_i sends center(B_{-i}) to 0, a boundary point of B_i to 1 and
    center(B_i) to infinity.  The table for (i, j) expands
    tau_j gamma_i^-1 tau_i^-1, the map through which a series on ball j is
    pulled to ball i when prefixing the letter i (allowed for j != -i).
    """
    if not group.normalized_infinity():
        raise FrameInvariantError(
            "frames need all balls proper; conjugate the group to move "
            "infinity into the open fundamental domain first"
        )
    if group.desc.e != 1:
        raise NotImplementedError("series theta is supported for unramified fields only")
    if cap is None:
        cap = digits
    frames: Dict[int, Frame] = {}
    for i in group.indices:
        p_i = group.balls[i].center
        p_mi = group.balls[-i].center
        w = group.balls[i].boundary_point()
        a = w - p_i
        c = w - p_mi
        tau = Moebius(a, -(p_mi * a), c, -(p_i * c))
        if not (tau(p_mi).is_zero() and tau(p_i) is INFINITY):
            raise FrameInvariantError(f"frame {i}: defining triple failed")
        one = group.desc.from_int(1, w.precision())
        if not (tau(w) == one):
            raise FrameInvariantError(f"frame {i}: anchor does not map to 1")
        tstar = tau(INFINITY)
        if not tstar.valuation() > 0:
            raise FrameInvariantError(f"frame {i}: infinity not interior to the unit ball")
        frames[i] = Frame(i, tau, tau.inverse(), p_i, w, tstar)
    tables: Dict[Tuple[int, int], CompositionTable] = {}
    for i in group.indices:
        for j in group.indices:
            if j == -i:
                continue
            mu = frames[j].tau @ group.gens[-i] @ frames[i].tau_inv
            series = moebius_to_unit_series(mu.a, mu.b, mu.c, mu.d, digits, cap)
            tables[(i, j)] = CompositionTable(series, terms=cap)
    return FrameSet(group, digits, cap, frames, tables)


# -- prefix (levels 0 and 1) --------------------------------------------------


def _require_off_open_balls(group: SchottkyGroup, D: Divisor0, what: str) -> None:
    for P, _ in D:
        i = group.ball_containing(P)
        if i is not None:
            raise DivisorPositionError(
                f"{what} has a support point inside open ball B_{i}; reduce it first"
            )


def monic_divisor_value(
    pairs: Sequence[Tuple[ProjPoint, int]],
    z: LocalFieldElement,
    digits: int,
) -> LocalFieldElement:
    """Value at finite z of the monic rational function prod (t - Q)^n.

    Infinity in the pair list carries no factor; the function is 1 at
    z = infinity because multiplicities sum to zero over each balanced block.
    """
    num: Optional[LocalFieldElement] = None
    den: Optional[LocalFieldElement] = None
    for Q, n in pairs:
        if Q is INFINITY or n == 0:
            continue
        d = z - Q
        if d.is_zero():
            raise ZeroDivisionError("evaluation at a zero or pole of the prefix")
        step = d ** abs(n)
        if n > 0:
            num = step if num is None else num * step
        else:
            den = step if den is None else den * step
    one = z.desc.from_int(1, digits)
    if num is None:
        num = one
    return num if den is None else num / den


def prefix_pairs(group: SchottkyGroup, E: Divisor0) -> List[Tuple[ProjPoint, int]]:
    """Zero/pole data of phi_0 * phi_1: the divisor E plus its level-1 orbit."""
    pairs: List[Tuple[ProjPoint, int]] = list(E)
    for j in group.indices:
        for Q, n in E.translate(group.gens[j]):
            pairs.append((Q, n))
    return pairs




# -- level-2 series -----------------------------------------------------------


def _pin_at_infinity(
    series: TateSeries, frame: Frame, digits: int
) -> Tuple[TateSeries, LocalFieldElement]:
    """Divide out the value at tau(infinity), where the true factor equals 1.

    Renormalizing against the function value rather than the constant term
    keeps every level an exact product of cross-ratio factors, so no stray
    constants accumulate across steps.  Returns the pinned series and the
    stripped unit (close to 1 for high levels).
    """
    h = series.eval(frame.tstar.with_precision(digits))
    if h.valuation() != 0:
        raise RuntimeError("level normalization value is not a unit")
    return series.scale(h.inverse().integer_rep(digits)), h


def init_series(
    group: SchottkyGroup, E: Divisor0, frames: FrameSet
) -> Tuple[Dict[int, TateSeries], Dict[int, LocalFieldElement]]:
    """Unit series of the length-2 orbit products in each frame coordinate.

    The factor for the orbit pair (u, u') of a two-letter word is
    ((A - uC) t + (B - uD)) / ((A - u'C) t + (B - u'D)) with
    [[A, B], [C, D]] = tau_i^-1; its zeros and poles lie strictly inside
    B_i, so the expansion is a norm-one unit.
    """
    digits, cap = frames.digits, frames.cap
    p = group.desc.p
    pairs = elementary_pairs(E)
    comps: Dict[int, TateSeries] = {}
    scalars: Dict[int, LocalFieldElement] = {}
    for i in group.indices:
        inv = frames.frames[i].tau_inv
        A, B, C, Dd = inv.a, inv.b, inv.c, inv.d
        total = TateSeries.one(p, digits, cap)
        for j in group.indices:
            if j == -i:
                continue
            gij = group.gens[i] @ group.gens[j]
            for a_q, b_q in pairs:
                u = gij(a_q)
                up = gij(b_q)
                factor = moebius_to_unit_series(
                    A - u * C, B - u * Dd, A - up * C, B - up * Dd, digits, cap
                )
                total = total * factor
        comps[i], scalars[i] = _pin_at_infinity(total, frames.frames[i], digits)
    return comps, scalars


def nabla_step(
    comps: Dict[int, TateSeries],
    frames: FrameSet,
    parallel: bool = False,
) -> Tuple[Dict[int, TateSeries], Dict[int, LocalFieldElement]]:
    """One application of the product-of-pullbacks operator.

    Component i of the output is prod over j != -i of component j composed
    with the (i, j) transition map, pinned back to value 1 at tau(infinity).
    """
    group = frames.group

    def one_component(i: int) -> Tuple[int, TateSeries, LocalFieldElement]:
        total: Optional[TateSeries] = None
        for j in group.indices:
            if j == -i:
                continue
            pulled = frames.tables[(i, j)].compose(comps[j])
            total = pulled if total is None else total * pulled
        pinned, h = _pin_at_infinity(total, frames.frames[i], frames.digits)
        return i, pinned, h

    if parallel:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(one_component, group.indices))
    else:
        results = [one_component(i) for i in group.indices]
    out: Dict[int, TateSeries] = {}
    scalars: Dict[int, LocalFieldElement] = {}
    for i, series, h in results:
        out[i] = series
        scalars[i] = h
    return out, scalars


# -- accumulated theta series -------------------------------------------------


@dataclass
class ThetaSeries:
    """All data of the truncated theta function z -> ((z) - (inf), E).

    The value at z is prefix * prod over i of comps[i](tau_i z); every
    component is pinned to 1 at the coordinate of infinity, so no global
    scalar is needed.  ``scalars`` records the per-level normalization units
    stripped during accumulation (they approach 1) and ``contraction`` the
    valuation of (component - 1) per level, a non-decreasing sequence.
    """

    group: SchottkyGroup
    E: Divisor0
    prefix: List[Tuple[ProjPoint, int]]
    comps: Dict[int, TateSeries]
    nu: int
    target: int
    digits: int
    frames: FrameSet
    bounds: BoundsData
    scalars: List[Dict[int, LocalFieldElement]] = field(default_factory=list)
    contraction: List[int] = field(default_factory=list)


def theta_series(
    group: SchottkyGroup,
    E: Divisor0,
    m: int,
    nu: Optional[int] = None,
    bounds: Optional[BoundsData] = None,
    digits: Optional[int] = None,
    parallel: bool = False,
) -> ThetaSeries:
    """Everything needed to evaluate ((z) - (inf), E) truncated at length nu.

    When nu is not given it is derived from the contraction bounds using the
    boundary anchors and infinity as worst-case evaluation points, since the
    eventual D is unknown here.
    """
    _require_off_open_balls(group, E, "E")
    if bounds is None:
        bounds = compute_bounds(group)
    if nu is None:
        nu = worst_case_nu(group, bounds, m)
    if digits is None:
        digits = m + DEFAULT_GUARD_DIGITS
    if group.nprec < digits:
        raise PrecisionError(
            f"group carries {group.nprec} digits but the target needs {digits}; "
            "reload the group and divisors at higher precision"
        )
    frames = build_frames(group, digits)
    comps, units = init_series(group, E, frames)
    acc = dict(comps)
    stripped = [units]
    profile = [min(c.dist_to_one_val() for c in comps.values())]
    level = comps
    for _ in range(3, nu + 1):
        level, units = nabla_step(level, frames, parallel=parallel)
        stripped.append(units)
        for i in group.indices:
            acc[i] = acc[i] * level[i]
        profile.append(min(c.dist_to_one_val() for c in level.values()))
    return ThetaSeries(
        group,
        E,
        prefix_pairs(group, E),
        acc,
        nu,
        m,
        digits,
        frames,
        bounds,
        stripped,
        profile,
    )


def worst_case_nu(
    group: SchottkyGroup,
    bounds: BoundsData,
    m: int,
    extra_points: Sequence[ProjPoint] = (),
) -> int:
    """Truncation length covering evaluation at the domain anchors and infinity."""
    pts: List[ProjPoint] = [INFINITY]
    for i in group.indices:
        pts.append(group.domain_anchor(i))
    pts.extend(extra_points)
    best = max(2, bounds.n_gamma)
    for z in pts:
        if z is INFINITY:
            continue
        D = Divisor0([(z, 1), (INFINITY, -1)])
        best = max(best, nu_for_target(m, D, bounds))
    return best


def theta_eval(ts: ThetaSeries, z: ProjPoint) -> LocalFieldElement:
    """((z) - (inf), E) truncated at the series' nu; exact 1 at infinity."""
    group = ts.group
    desc = group.desc
    if z is INFINITY:
        return desc.from_int(1, ts.digits)
    i = group.ball_containing(z)
    if i is not None:
        raise EvaluationDomainError(f"evaluation point lies inside open ball B_{i}")
    value = monic_divisor_value(ts.prefix, z, ts.digits)
    for j in group.indices:
        t = ts.frames.tau(j)(z)
        if t is INFINITY or t.valuation() < 0:
            raise EvaluationDomainError(
                f"frame coordinate of the evaluation point leaves the unit ball (ball {j})"
            )
        value = value * ts.comps[j].eval(t.with_precision(ts.digits))
    return value


def _eval_over_divisor(ts: ThetaSeries, D: Divisor0) -> LocalFieldElement:
    value = ts.group.desc.from_int(1, ts.digits)
    for P, mult in D:
        if P is INFINITY:
            continue
        value = value * theta_eval(ts, P) ** mult
    return value


def pair_truncation(group: SchottkyGroup, D: Divisor0, m: int) -> int:
    """The word length at which theta_pair(group, D, ., m) truncates."""
    if not group.normalized_infinity():
        s = group.normalizing_conjugator()
        return pair_truncation(
            group.conjugated_to_normalize_infinity(), D.translate(s), m
        )
    bounds = compute_bounds(group)
    red_d = group.reduce_divisor(D, unit=group.desc.from_int(1, group.nprec))
    if len(red_d) == 0:
        return 0
    return max(2, bounds.n_gamma, nu_for_target(m, red_d, bounds))


def theta_pair(
    group: SchottkyGroup,
    D: Divisor0,
    E: Divisor0,
    m: int,
    nu: Optional[int] = None,
    digits: Optional[int] = None,
    parallel: bool = False,
) -> LocalFieldElement:
    """The pairing (D, E) of the full group, correct to m digits relatively.

    Both divisors are replaced by equivalent ones supported on the closure of
    the fundamental domain, using separated boundary anchors so the two
    supports cannot collide.  Works on any group presentation: when infinity
    is not interior to the domain the whole computation is conjugated first.
    The default working precision is m plus a guard; a pairing value of
    valuation v only retains digits - v relative digits, so raise ``digits``
    when large values are expected.
    """
    if not group.normalized_infinity():
        s = group.normalizing_conjugator()
        conj = group.conjugated_to_normalize_infinity()
        return theta_pair(
            conj, D.translate(s), E.translate(s), m,
            nu=nu, digits=digits, parallel=parallel,
        )
    desc = group.desc
    bounds = compute_bounds(group)
    unit_d = desc.from_int(1, group.nprec)
    unit_e = desc.from_int(1 + desc.p, group.nprec)
    red_d = group.reduce_divisor(D, unit=unit_d)
    red_e = group.reduce_divisor(E, unit=unit_e)
    if len(red_e) == 0 or len(red_d) == 0:
        return desc.from_int(1, m + DEFAULT_GUARD_DIGITS)
    if not red_d.supports_disjoint(red_e):
        raise SupportCollisionError(
            "reduced divisors share a support point; the pairing is undefined there"
        )
    if nu is None:
        nu = max(2, bounds.n_gamma, nu_for_target(m, red_d, bounds))
    ts = theta_series(group, red_e, m, nu=nu, bounds=bounds, digits=digits, parallel=parallel)
    return _eval_over_divisor(ts, red_d)


# -- logarithmic derivative, embedding, periods -------------------------------


def u_gamma_dlog(
    group: SchottkyGroup,
    word: Word,
    z: ProjPoint,
    m: int,
    base: Optional[ProjPoint] = None,
) -> LocalFieldElement:
    """d/dz log u_gamma(z) where u_gamma(z) = ((z) - (inf), (gamma b) - (b)).

    The value is the sum of 1/(z - Q) over prefix zeros minus poles plus the
    pulled-back logarithmic derivatives of the unit series; normalization
    scalars drop out.  The choice of b only scales u_gamma by a constant, so
    the result does not depend on it, and on a presentation whose domain
    misses infinity the chain rule transports the conjugated value back.
    """
    if z is INFINITY:
        raise EvaluationDomainError("logarithmic derivative needs a finite point")
    if not group.normalized_infinity():
        s = group.normalizing_conjugator()
        conj = group.conjugated_to_normalize_infinity()
        sz = s(z)
        if sz is INFINITY:
            raise EvaluationDomainError(
                "point is the pole of the normalizing coordinate; pick another"
            )
        sb = None
        if base is not None:
            sb = s(base)
            if sb is INFINITY:
                sb = None
        inner = u_gamma_dlog(conj, word, sz, m, base=sb)
        return inner * s.derivative_factor(z)
    if base is None:
        base = group.interior_point()
    g = group.moebius_of(word)
    E = Divisor0([(g(base), 1), (base, -1)])
    unit_e = group.desc.from_int(1 + group.desc.p, group.nprec)
    red_e = group.reduce_divisor(E, unit=unit_e)
    bounds = compute_bounds(group)
    nu = worst_case_nu(group, bounds, m, extra_points=[z])
    ts = theta_series(group, red_e, m, nu=nu, bounds=bounds)
    i = group.ball_containing(z)
    if i is not None:
        raise EvaluationDomainError(f"point lies inside open ball B_{i}")
    total = group.desc.from_int(0, ts.digits)
    for Q, n in ts.prefix:
        if Q is INFINITY or n == 0:
            continue
        d = z - Q
        if d.is_zero():
            raise ZeroDivisionError("dlog at a zero or pole of the prefix")
        total = total + group.desc.from_int(n, ts.digits) / d
    for j in group.indices:
        tau = ts.frames.tau(j)
        t = tau(z).with_precision(ts.digits)
        series = ts.comps[j]
        total = total + (
            series.derivative().eval(t) / series.eval(t)
        ) * tau.derivative_factor(z)
    return total


def canonical_embedding(group: SchottkyGroup, z: ProjPoint, m: int) -> Tuple[LocalFieldElement, ...]:
    """The point (dlog u_1 : ... : dlog u_g) of the curve's canonical map."""
    if group.genus < 3:
        warnings.warn(
            "canonical embedding is only an embedding for genus at least 3",
            stacklevel=2,
        )
    return tuple(u_gamma_dlog(group, (i,), z, m) for i in range(1, group.genus + 1))


@dataclass
class PeriodMatrix:
    genus: int
    entries: List[List[LocalFieldElement]]

    def asymmetry_valuation(self):
        """Least valuation of Q_ij / Q_ji - 1 off the diagonal; large is good."""
        worst = math.inf
        for i in range(self.genus):
            for j in range(i + 1, self.genus):
                ratio = self.entries[i][j] / self.entries[j][i]
                dev = ratio - ratio.desc.from_int(1, ratio.prec_pi)
                worst = min(worst, dev.valuation())
        return worst


def period_matrix(
    group: SchottkyGroup,
    m: int,
    d_unit: Optional[LocalFieldElement] = None,
    e_unit: Optional[LocalFieldElement] = None,
    digits: Optional[int] = None,
    parallel: bool = False,
    base: Optional[ProjPoint] = None,
) -> PeriodMatrix:
    """Q_ij = (iota(gamma_i), iota(gamma_j)) with iota(gamma) = (gamma z) - (z).

    After reduction the base point cancels against itself, leaving divisors
    supported on boundary anchors; the two sides use different anchor units,
    so diagonal entries stay well-defined, and the matrix does not depend on
    the base point z.  Entries have valuation roughly the multiplier
    valuations, which eats into the guard digits; pass ``digits`` to keep m
    relative digits on deep entries.
    """
    if not group.normalized_infinity():
        s = group.normalizing_conjugator()
        if base is not None:
            base = s(base)
        group = group.conjugated_to_normalize_infinity()
    desc = group.desc
    if base is None:
        base = group.interior_point()
    if d_unit is None:
        d_unit = desc.from_int(1, group.nprec)
    if e_unit is None:
        e_unit = desc.from_int(1 + desc.p, group.nprec)
    bounds = compute_bounds(group)
    g = group.genus
    red_ds = []
    red_es = []
    for i in range(1, g + 1):
        iota = Divisor0([(group.gens[i](base), 1), (base, -1)])
        red_ds.append(group.reduce_divisor(iota, unit=d_unit))
        red_es.append(group.reduce_divisor(iota, unit=e_unit))
    nu = max(
        max(2, bounds.n_gamma, nu_for_target(m, rd, bounds)) for rd in red_ds
    )
    entries: List[List[Optional[LocalFieldElement]]] = [[None] * g for _ in range(g)]
    for j in range(g):
        ts = theta_series(group, red_es[j], m, nu=nu, bounds=bounds, digits=digits, parallel=parallel)
        for i in range(g):
            entries[i][j] = _eval_over_divisor(ts, red_ds[i])
    return PeriodMatrix(g, entries)  # type: ignore[arg-type]
