"""Convergence data for truncated theta products, exact in valuations.

The infinite product over group elements converges because the orbit balls
B(gamma) shrink geometrically: r(gamma) <= C * rho^length(gamma) once the
length reaches n(Gamma).  This module computes n(Gamma), the contraction rate
rho, the constant C and the divisor-dependent quantities delta and diameter,
all as exact valuations (a quantity q = p^-v is stored as the rational v).
From these it derives the truncation length nu that guarantees a requested
number of correct digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .localfield import LocalFieldElement
from .projline import INFINITY, Ball, Divisor0, Moebius, ProjPoint
from .schottky import SchottkyGroup, Word


@dataclass(frozen=True)
class BoundsData:
    """Contraction data of a group: valuations of rho and C plus a ball table.

    For a group whose domain misses infinity the table lives in conjugated
    coordinates; ``to_table_coords`` is then the conjugating map and
    divisor-dependent quantities translate points through it first.  The
    orbit products themselves are indexed by words, and word-for-word the
    pairing factors agree across presentations, so truncation lengths
    derived here apply to the original group unchanged.
    """

    n_gamma: int
    rho_val: Fraction     # v(rho) > 0, rho = p^-rho_val
    c_val: Fraction       # v(C), C = p^-c_val
    table: Tuple[Tuple[Word, Ball], ...]   # orbit balls used for delta distances
    to_table_coords: Optional["Moebius"] = None

    def centers(self) -> List[LocalFieldElement]:
        return [B.center for _, B in self.table]


def level_balls(group: SchottkyGroup, n: int) -> List[Tuple[Word, Ball]]:
    return [(w, group.word_ball(w)) for w in group.words_of_length(n)]


def compute_n_gamma(group: SchottkyGroup, max_level: int = 12) -> int:
    """Least n >= 1 with every orbit ball of length-n words proper.

    Properness persists for longer words because their balls nest inside the
    length-n ones, so scanning levels upward is enough.  A group whose domain
    misses infinity entirely would never terminate; the level cap guards that.
    """
    for n in range(1, max_level + 1):
        if all(not B.complement for _, B in level_balls(group, n)):
            return n
    raise RuntimeError(
        f"orbit balls still reach infinity at word length {max_level}; "
        "is infinity a limit point of the group?"
    )


def radius_increments(group: SchottkyGroup):
    """v(gamma_u') on ball v, for each admissible consecutive letter pair.

    For a normalized group the pole of gamma_u lies in the open ball B_{-u},
    disjoint from the closed ball B_v when v != -u, so the derivative
    valuation is constant on B_v+ and the center measures it.  Prepending
    the letter u to a word starting with v shifts the orbit ball radius by
    exactly this amount, making radius valuations path sums over the letter
    digraph.
    """
    d = {}
    for u in group.indices:
        g = group.gens[u]
        for v in group.indices:
            if v == -u:
                continue
            d[(u, v)] = Fraction(g.derivative_factor(group.balls[v].center).valuation())
    return d


def _min_cycle_mean(nodes, d) -> Fraction:
    # Karp: D[k][v] = least k-edge path weight ending at v, free start
    n = len(nodes)
    inf = math.inf
    D = [{v: Fraction(0) for v in nodes}]
    for _ in range(n):
        prev = D[-1]
        cur = {}
        for v in nodes:
            best = inf
            for u in nodes:
                if (u, v) in d and prev[u] is not inf:
                    w = prev[u] + d[(u, v)]
                    if w < best:
                        best = w
            cur[v] = best
        D.append(cur)
    best_mean = inf
    for v in nodes:
        if D[n][v] is inf:
            continue
        worst = None
        for k in range(n):
            if D[k][v] is inf:
                continue
            mean = (D[n][v] - D[k][v]) / (n - k)
            if worst is None or mean > worst:
                worst = mean
        if worst is not None and worst < best_mean:
            best_mean = worst
    assert best_mean is not inf
    return best_mean


def _potentials(nodes, d, mu: Fraction):
    # shortest walk distances for the reduced weights d - mu (no negative
    # cycles remain), so any path u -> v satisfies sum d >= len*mu + pi_v - pi_u
    pi = {v: Fraction(0) for v in nodes}
    for _ in range(len(nodes)):
        changed = False
        for (u, v), w in d.items():
            cand = pi[u] + w - mu
            if cand < pi[v]:
                pi[v] = cand
                changed = True
        if not changed:
            break
    else:
        raise RuntimeError("orbit balls do not contract along some letter cycle")
    return pi


def compute_bounds(group: SchottkyGroup, max_level: int = 12) -> BoundsData:
    """Contraction rate and offset from the letter digraph of radius shifts.

    rho is the minimum cycle mean of the shift digraph and C comes from its
    node potentials, giving r_v(gamma) >= c_val + len * rho_val for every
    reduced word.  A group whose domain misses infinity is conjugated first;
    word-indexed quantities carry over, point-dependent ones translate.
    """
    if not group.normalized_infinity():
        # all data in conjugated coordinates: infinity may even be a limit
        # point of the original presentation (a generator can fix it), in
        # which case properness levels only exist after conjugation
        inner = compute_bounds(group.conjugated_to_normalize_infinity(), max_level)
        return BoundsData(
            inner.n_gamma,
            inner.rho_val,
            inner.c_val,
            inner.table,
            group.normalizing_conjugator(),
        )
    nodes = group.indices
    d = radius_increments(group)
    rho_val = _min_cycle_mean(nodes, d)
    if rho_val <= 0:
        raise RuntimeError("orbit balls do not contract: found a non-shrinking letter cycle")
    pi = _potentials(nodes, d, rho_val)
    spread = min(pi.values()) - max(pi.values())
    c_val = min(group.balls[i].radius_val for i in nodes) + spread - rho_val
    bounds = BoundsData(1, rho_val, c_val, tuple(level_balls(group, 1)))
    for length in (1, 2, 3):
        for w in group.words_of_length(length):
            assert group.word_ball(w).radius_val >= c_val + length * rho_val
    return bounds


# -- divisor-dependent quantities ---------------------------------------------


def delta_val_of_point(z: ProjPoint, bounds: BoundsData) -> Fraction:
    """v(delta(z)) where delta(z) = max |z - c(gamma)|^-1 over the level table.

    delta(infinity) = 1 by convention.
    """
    if z is INFINITY:
        return Fraction(0)
    best = None
    for c in bounds.centers():
        v = (z - c).valuation()
        if best is None or v > best:
            best = v
    return -Fraction(best)


def delta_val_of_divisor(D: Divisor0, bounds: BoundsData) -> Fraction:
    # delta(D) = max over the support, so the valuation is the min
    vals = [delta_val_of_point(z, bounds) for z in D.support()]
    if not vals:
        return Fraction(0)
    return min(vals)


def diameter_val(D: Divisor0) -> Optional[Fraction]:
    """v(R_D), the valuation of the largest distance between finite support points.

    None when fewer than two finite points: the diameter term is then omitted
    from the tail bound (those pairings have no |z - w| factor).
    """
    finite = D.finite_support()
    best = None
    for i in range(len(finite)):
        for j in range(i + 1, len(finite)):
            v = (finite[i] - finite[j]).valuation()
            if best is None or v < best:
                best = v
    return None if best is None else Fraction(best)


def _in_table_coords(D: Divisor0, bounds: BoundsData) -> Divisor0:
    if bounds.to_table_coords is None:
        return D
    return D.translate(bounds.to_table_coords)


def tail_valuation(length: int, D: Divisor0, bounds: BoundsData) -> Fraction:
    """Guaranteed valuation of (D, gamma E) - 1 for words gamma of the given length.

    The product bound C * R_D * delta(D)^2 * rho^length, as a valuation.
    """
    D = _in_table_coords(D, bounds)
    v = bounds.c_val + 2 * delta_val_of_divisor(D, bounds) + length * bounds.rho_val
    r = diameter_val(D)
    if r is not None:
        v += r
    return v


def nu_for_target(m, D: Divisor0, bounds: BoundsData) -> int:
    """Truncation length: words up to this length give m correct digits.

    Every omitted factor then satisfies v((D, gamma E) - 1) > m, so the
    truncated product agrees with the full one to valuation m.
    """
    D = _in_table_coords(D, bounds)
    x = bounds.c_val + 2 * delta_val_of_divisor(D, bounds)
    r = diameter_val(D)
    if r is not None:
        x += r
    need = (Fraction(m) - x) / bounds.rho_val
    return max(2, bounds.n_gamma, math.ceil(need))
