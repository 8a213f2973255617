"""Schottky groups in good position over a local field.

A rank-g group is given by generators gamma_1 .. gamma_g together with 2g
balls B_i, i in {+-1 .. +-g}, forming a good fundamental domain: the closed
balls are pairwise disjoint and gamma_i maps the complement of B_{-i} onto
the closure of B_i.  Everything downstream (naive products, power series,
error bounds) consumes a verified ``SchottkyGroup``.

Group elements are tracked as words in the generators: a word is a tuple of
nonzero ints, entry i meaning gamma_i and -i meaning gamma_i^{-1}.  Words
are kept reduced (no adjacent cancelling letters).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .localfield import (
    FieldDescriptor,
    LocalFieldElement,
    PrecisionError,
    parse_rational_literal,
)
from .projline import (
    INFINITY,
    Ball,
    Divisor0,
    Moebius,
    ProjPoint,
    ball_image,
    balls_disjoint,
    ball_to_text,
    identity_moebius,
    parse_ball,
)

Word = Tuple[int, ...]


class BadGroupError(ValueError):
    """The given generators and balls do not form a good fundamental domain."""


def is_hyperbolic(g: Moebius) -> bool:
    # scale invariant form of |tr|^2 > |det|
    return 2 * g.trace().valuation() < g.det().valuation()


def reduce_word(word: Sequence[int]) -> Word:
    out: List[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def word_count(genus: int, length: int) -> int:
    """Number of reduced words of length <= ``length`` (identity included)."""
    if genus == 1:
        return 2 * length + 1
    return (genus * (2 * genus - 1) ** length - 1) // (genus - 1)


@dataclass
class GoodPositionReport:
    ok: bool
    checks: List[Tuple[str, bool, str]]

    def failures(self) -> List[str]:
        return [f"{name}: {msg}" for name, passed, msg in self.checks if not passed]

    def __str__(self) -> str:
        lines = []
        for name, passed, msg in self.checks:
            mark = "ok " if passed else "FAIL"
            lines.append(f"[{mark}] {name}: {msg}")
        return "\n".join(lines)


class SchottkyGroup:
    """Verified Schottky data: generators, fundamental-domain balls, caches."""

    def __init__(
        self,
        desc: FieldDescriptor,
        generators: Sequence[Moebius],
        balls: Dict[int, Ball],
        nprec: int,
        verify: bool = True,
        gen_rows: Optional[List[List[List[Fraction]]]] = None,
    ):
        self.desc = desc
        self.nprec = nprec
        self.gen_rows = gen_rows  # exact rational entries, when known
        self.genus = len(generators)
        if self.genus < 1:
            raise BadGroupError("need at least one generator")
        self.gens: Dict[int, Moebius] = {}
        for i, g in enumerate(generators, start=1):
            self.gens[i] = g
            self.gens[-i] = g.inverse()
        self.balls = dict(balls)
        expected = {i for i in range(1, self.genus + 1)} | {
            -i for i in range(1, self.genus + 1)
        }
        if set(self.balls) != expected:
            raise BadGroupError(f"expected balls indexed by {sorted(expected)}")
        self._ball_cache: Dict[Word, Ball] = {}
        if verify:
            report = self.verify_good_position()
            if not report.ok:
                raise BadGroupError("; ".join(report.failures()))

    @property
    def indices(self) -> List[int]:
        return [i for i in range(1, self.genus + 1)] + [
            -i for i in range(1, self.genus + 1)
        ]

    def verify_good_position(self) -> GoodPositionReport:
        checks: List[Tuple[str, bool, str]] = []
        for i in range(1, self.genus + 1):
            g = self.gens[i]
            ok = is_hyperbolic(g)
            checks.append(
                (
                    f"hyperbolic gamma_{i}",
                    ok,
                    f"2 v(tr) = {2 * g.trace().valuation()} "
                    f"{'<' if ok else '>='} v(det) = {g.det().valuation()}",
                )
            )
        idx = self.indices
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                Ba, Bb = self.balls[idx[a]], self.balls[idx[b]]
                ok = balls_disjoint(Ba.closure(), Bb.closure())
                checks.append(
                    (
                        f"disjoint B_{idx[a]}+, B_{idx[b]}+",
                        ok,
                        "closed balls disjoint" if ok else "closed balls overlap",
                    )
                )
        for i in idx:
            ok, msg = self._check_pairing(i)
            checks.append((f"gamma_{i}(P1 - B_{-i}) = B_{i}+", ok, msg))
        return GoodPositionReport(all(p for _, p, _ in checks), checks)

    def _check_pairing(self, i: int) -> Tuple[bool, str]:
        outside = self.balls[-i].set_complement()  # open complement of B_{-i}
        try:
            img = ball_image(self.gens[i], outside)
        except Exception as exc:  # noqa: BLE001  - report, do not crash
            return False, f"image computation failed: {exc}"
        target = self.balls[i].closure()
        if img == target:
            return True, f"image is {ball_to_text(target)}"
        return False, f"image {ball_to_text(img)} != {ball_to_text(target)}"

    # -- reduced words ---------------------------------------------------

    def reduced_words(self, max_len: int, min_len: int = 0) -> Iterator[Word]:
        """All reduced words with min_len <= length <= max_len, identity first."""
        level: List[Word] = [()]
        if min_len == 0:
            yield ()
        for n in range(1, max_len + 1):
            nxt: List[Word] = []
            for w in level:
                for j in self.indices:
                    if w and w[-1] == -j:
                        continue
                    w2 = w + (j,)
                    nxt.append(w2)
                    if n >= min_len:
                        yield w2
            level = nxt

    def words_of_length(self, n: int) -> List[Word]:
        return list(self.reduced_words(n, min_len=n)) if n > 0 else [()]

    def moebius_of(self, word: Sequence[int]) -> Moebius:
        g = None
        for letter in word:
            g = self.gens[letter] if g is None else g @ self.gens[letter]
        return g if g is not None else identity_moebius(self.desc, self.nprec)

    # -- orbit balls -----------------------------------------------------

    def word_ball(self, word: Sequence[int]) -> Ball:
        """The ball B(gamma) = gamma(P1 - B_{-t}+) for a nonempty reduced word.

        Contains every limit point reachable through the word's prefix; for a
        single letter this is exactly the open ball B_i.
        """
        w = reduce_word(word)
        if not w:
            raise ValueError("word ball needs a nonempty word")
        if w in self._ball_cache:
            return self._ball_cache[w]
        if len(w) == 1:
            B = self.balls[w[0]]
        else:
            inner = self.word_ball(w[1:])
            B = ball_image(self.gens[w[0]], inner)
        self._ball_cache[w] = B
        return B

    def ball_containing(self, z: ProjPoint) -> Optional[int]:
        """Index i with z in the open ball B_i, or None if z is in the domain."""
        for i in self.indices:
            if self.balls[i].contains(z):
                return i
        return None

    # -- reduction into the fundamental domain ---------------------------

    def reduce_point(self, z: ProjPoint, max_steps: int = 10_000) -> Tuple[Word, ProjPoint]:
        """Write z = gamma(z0) with z0 outside every open ball B_i.

        Returns (word of gamma, z0).  Points on a boundary sphere are already
        reduced.  A limit point would never terminate; the step cap turns that
        into an error.  Each inverse letter expands distances near the limit
        set and so erodes digits; a point that was merely indistinguishable
        from a limit point collapses onto a generator pole with almost no
        precision left, while a point that genuinely maps to infinity matches
        the pole at full precision.  Half the loaded precision separates the
        two cases with a wide margin.
        """
        word: List[int] = []
        for _ in range(max_steps):
            i = self.ball_containing(z)
            if i is None:
                return tuple(word), z
            g = self.gens[-i]
            if z is not INFINITY:
                den = g.c * z + g.d
                if den.is_zero() and not den.is_exact_zero() and den.prec_pi < self.nprec // 2:
                    raise PrecisionError(
                        "point reduction ran out of digits; the point is within "
                        "working precision of a limit point"
                    )
            z = g(z)
            word.append(i)
        raise RuntimeError(
            "point reduction did not terminate; the point is (numerically) a limit point"
        )

    def domain_anchor(self, i: int, unit: Optional[LocalFieldElement] = None) -> LocalFieldElement:
        """A point on the boundary sphere of B_{-i}, at distance exactly the radius.

        Distinct ``unit`` choices give anchors in distinct residue classes of
        the sphere, which keeps independently reduced divisors from colliding.
        """
        return self.balls[-i].boundary_point(unit)

    def reduce_divisor(
        self, D: Divisor0, unit: Optional[LocalFieldElement] = None
    ) -> Divisor0:
        """An equivalent degree-zero divisor supported outside the open balls.

        Each point P = gamma(P0) contributes the telescope
        (P0) + sum_t ((gamma_{i_t} z_{i_t}) - (z_{i_t})) over the letters of
        gamma, where z_i is the boundary anchor of B_{-i}; every term lies on
        the fundamental domain's closure and the sum is equivalent to (P).
        """
        pieces: List[Tuple[ProjPoint, int]] = []
        for P, m in D:
            word, P0 = self.reduce_point(P)
            pieces.append((P0, m))
            for letter in word:
                z = self.domain_anchor(letter, unit)
                pieces.append((self.gens[letter](z), m))
                pieces.append((z, -m))
        return Divisor0(pieces)

    def interior_point(self, avoid: Sequence[ProjPoint] = ()) -> ProjPoint:
        """A point of the open fundamental domain, avoiding the given points.

        Tries infinity first, then small integer candidates.
        """
        def good(z: ProjPoint) -> bool:
            for i in self.indices:
                if self.balls[i].closure().contains(z):
                    return False
            for w in avoid:
                if (z is INFINITY) != (w is INFINITY):
                    continue
                if z is INFINITY or z == w:
                    return False
            return True

        if good(INFINITY):
            return INFINITY
        for n in range(0, 500):
            for s in (n, -n) if n else (0,):
                z = self.desc.from_int(s, self.nprec)
                if good(z):
                    return z
        # when a complement ball confines the domain near its center, walk
        # inward sphere by sphere (good position admits at most one such ball)
        for i in self.indices:
            B = self.balls[i]
            if not B.complement:
                continue
            k0 = int(B.radius_val * self.desc.e) + 1
            for k in range(k0, k0 + 40):
                pi_k = self.desc.uniformizer(self.nprec) ** k
                for u in range(1, min(self.desc.p, 4)):
                    z = B.center + pi_k * u
                    if good(z):
                        return z
        raise RuntimeError("could not find an interior point of the fundamental domain")

    def normalized_infinity(self) -> bool:
        """True when infinity lies outside all the closed balls B_i+."""
        return all(not self.balls[i].closure().contains(INFINITY) for i in self.indices)

    def normalizing_conjugator(self) -> Moebius:
        """The coordinate change s with s(interior point) = infinity.

        Identity when infinity is already interior to the fundamental domain.
        """
        one = self.desc.from_int(1, self.nprec)
        zero = self.desc.from_int(0, self.nprec)
        if self.normalized_infinity():
            return Moebius(one, zero, zero, one)
        # send an interior finite point to infinity with s = 1/(z - z0)
        z0 = self.interior_point()
        return Moebius(zero, one, one, -z0)

    def conjugated_to_normalize_infinity(self) -> "SchottkyGroup":
        """A conjugate group whose fundamental domain contains infinity.

        Conjugating by s moves the balls to s(B_i) and the generators to
        s gamma_i s^{-1}; theta values transform by the same change of
        coordinates on divisors.  Identity when already normalized.
        """
        if self.normalized_infinity():
            return self
        s = self.normalizing_conjugator()
        gens = [s @ self.gens[i] @ s.inverse() for i in range(1, self.genus + 1)]
        balls = {i: ball_image(s, B) for i, B in self.balls.items()}
        return SchottkyGroup(self.desc, gens, balls, self.nprec)


# -- serialization ------------------------------------------------------------


def group_to_json(group: SchottkyGroup) -> dict:
    if group.gen_rows is None:
        raise ValueError("group has no exact rational generator entries to serialize")
    data: dict = {
        "p": group.desc.p,
        "ramification": {"e": group.desc.e},
        "generators": [[[str(x) for x in row] for row in rows] for rows in group.gen_rows],
        "balls": [],
    }
    if group.desc.e == 2:
        data["ramification"]["c"] = str(group.desc.eisenstein_unit)
    for i in sorted(group.balls, key=lambda k: (abs(k), k < 0)):
        B = group.balls[i]
        if B.center_fraction is None:
            raise ValueError(f"ball {i} has no exact rational center to serialize")
        data["balls"].append(
            {
                "index": i,
                "center": str(B.center_fraction),
                "radius_val": str(B.radius_val),
                "complement": B.complement,
                "closed": B.closed,
            }
        )
    return data


def group_from_json(data: dict, nprec: int, verify: bool = True) -> SchottkyGroup:
    p = int(data["p"])
    ram = data.get("ramification", {"e": 1})
    e = int(ram.get("e", 1)) if isinstance(ram, dict) else int(ram)
    if e == 1:
        desc = FieldDescriptor(p)
    else:
        c = Fraction(str(ram.get("c", 1))) if isinstance(ram, dict) else Fraction(1)
        desc = FieldDescriptor(p, 2, c)
    gens = []
    gen_rows = []
    for rows in data["generators"]:
        rat = [[parse_rational_literal(str(x), p) for x in row] for row in rows]
        gen_rows.append(rat)
        gens.append(Moebius.from_rationals(desc, rat, nprec))
    balls: Dict[int, Ball] = {}
    for entry in data["balls"]:
        center = parse_rational_literal(str(entry["center"]), p)
        rv = Fraction(str(entry["radius_val"]))
        balls[int(entry["index"])] = Ball(
            desc.from_fraction(center, nprec),
            rv,
            bool(entry["complement"]),
            bool(entry["closed"]),
            center_fraction=center,
        )
    return SchottkyGroup(desc, gens, balls, nprec, verify=verify, gen_rows=gen_rows)


def load_group(path: str, nprec: int, verify: bool = True) -> SchottkyGroup:
    with open(path, encoding="utf-8") as fh:
        return group_from_json(json.load(fh), nprec, verify=verify)


def save_group(group: SchottkyGroup, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(group_to_json(group), fh, indent=2)
        fh.write("\n")


def divisor_from_json(data: list, desc: FieldDescriptor, nprec: int) -> Divisor0:
    pieces: List[Tuple[ProjPoint, int]] = []
    for entry in data:
        q = entry["point"]
        mult = int(entry["mult"])
        if isinstance(q, str) and q.strip().lower() in ("inf", "infinity", "oo"):
            pieces.append((INFINITY, mult))
        else:
            pieces.append((desc.from_fraction(parse_rational_literal(str(q), desc.p), nprec), mult))
    return Divisor0(pieces)


def load_divisor(path: str, desc: FieldDescriptor, nprec: int) -> Divisor0:
    with open(path, encoding="utf-8") as fh:
        return divisor_from_json(json.load(fh), desc, nprec)
