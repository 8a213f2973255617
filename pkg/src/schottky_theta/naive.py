"""Brute-force theta products over explicit word enumeration.

The pairing (D, E) of the whole group is approximated by the product of
(D, gamma E) over all reduced words gamma up to a truncation length.  The
cost is exponential in the length, which is exactly why this module exists:
it is the transparent correctness oracle and the benchmark baseline for the
series algorithm, never the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .bounds import BoundsData, compute_bounds, nu_for_target
from .localfield import LocalFieldElement
from .projline import Divisor0, Moebius, UndefinedCrossRatioError, pair_divisors
from .schottky import SchottkyGroup, Word, word_count

DEFAULT_WORD_BUDGET = 10**7


class BudgetExceededError(RuntimeError):
    """The requested truncation needs more words than the budget allows."""


class SupportCollisionError(ValueError):
    """Some translated E point met a D point, so a cross-ratio degenerated."""


@dataclass
class TruncatedTheta:
    value: LocalFieldElement
    truncation: int
    group: SchottkyGroup
    nu: Optional[int] = None


def iter_word_maps(group: SchottkyGroup, n: int) -> Iterator[Tuple[Word, Moebius]]:
    """All nonempty reduced words of length <= n with their matrices.

    Depth first within each head class, reusing the parent product for each
    extension, so the whole enumeration costs one matrix product per word.
    """
    if n < 1:
        return
    for i in group.indices:
        stack: List[Tuple[Word, Moebius]] = [((i,), group.gens[i])]
        while stack:
            w, g = stack.pop()
            yield w, g
            if len(w) < n:
                for j in group.indices:
                    if j != -w[-1]:
                        stack.append((w + (j,), g @ group.gens[j]))


def _pair_factor(D: Divisor0, E: Divisor0, g: Optional[Moebius], word) -> LocalFieldElement:
    moved = E if g is None else E.translate(g)
    try:
        return pair_divisors(D, moved)
    except UndefinedCrossRatioError as exc:
        raise SupportCollisionError(
            f"support of D meets gamma E for gamma = {word}: {exc}"
        ) from exc


def theta_over_maps(
    D: Divisor0, E: Divisor0, maps: Iterable[Optional[Moebius]]
) -> LocalFieldElement:
    """Product of (D, gE) over an explicit collection of maps; None means identity."""
    value: Optional[LocalFieldElement] = None
    for g in maps:
        factor = _pair_factor(D, E, g, g)
        value = factor if value is None else value * factor
    if value is None:
        raise ValueError("empty collection of maps")
    return value


def theta_over_words(
    group: SchottkyGroup, D: Divisor0, E: Divisor0, words: Iterable[Sequence[int]]
) -> LocalFieldElement:
    return theta_over_maps(D, E, (group.moebius_of(w) for w in words))


def theta_naive(
    group: SchottkyGroup,
    D: Divisor0,
    E: Divisor0,
    n: int,
    budget: int = DEFAULT_WORD_BUDGET,
) -> TruncatedTheta:
    """The product over all reduced words of length <= n, identity included."""
    total = word_count(group.genus, n)
    if total > budget:
        raise BudgetExceededError(
            f"truncation length {n} needs {total} words, over the budget of {budget}"
        )
    value = _pair_factor(D, E, None, ())
    for w, g in iter_word_maps(group, n):
        value = value * _pair_factor(D, E, g, w)
    return TruncatedTheta(value, n, group)


def theta_naive_auto(
    group: SchottkyGroup,
    D: Divisor0,
    E: Divisor0,
    m,
    bounds: Optional[BoundsData] = None,
    budget: int = DEFAULT_WORD_BUDGET,
) -> TruncatedTheta:
    """Truncate far enough that the tail cannot move the first m digits."""
    if bounds is None:
        bounds = compute_bounds(group)
    nu = nu_for_target(m, D, bounds)
    out = theta_naive(group, D, E, nu, budget=budget)
    out.nu = nu
    return out


def theta_discontinuous(
    group: SchottkyGroup,
    D: Divisor0,
    E: Divisor0,
    cosets: Sequence[Optional[Moebius]],
    n: int,
    budget: int = DEFAULT_WORD_BUDGET,
) -> LocalFieldElement:
    """Theta of a discontinuous overgroup G from its finite cosets over the group.

    (D, E)_G = prod_i (D, g_i E) with g_i the coset representatives; None
    stands for the identity representative.
    """
    value: Optional[LocalFieldElement] = None
    for g in cosets:
        moved = E if g is None else E.translate(g)
        part = theta_naive(group, D, moved, n, budget=budget).value
        value = part if value is None else value * part
    if value is None:
        raise ValueError("empty coset list")
    return value
