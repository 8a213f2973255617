import json
import random
from pathlib import Path

import pytest

from schottky_theta.localfield import PrecisionError
from schottky_theta.projline import INFINITY, Divisor0
from schottky_theta.schottky import (
    BadGroupError,
    SchottkyGroup,
    group_from_json,
    group_to_json,
    load_group,
    divisor_from_json,
    reduce_word,
    word_count,
)

GROUPS = Path(__file__).resolve().parent.parent / "groups"
FIXTURES = [
    "q3_plain.json",
    "q3_scaled_gens.json",
    "q3_scaled_gens_alt.json",
    "q5_diag.json",
    "q5_diag_wide.json",
]
PREC = 60


@pytest.fixture(scope="module")
def q3_plain():
    return load_group(str(GROUPS / "q3_plain.json"), PREC)


@pytest.fixture(scope="module")
def q3_scaled():
    return load_group(str(GROUPS / "q3_scaled_gens.json"), PREC)


# -- good position ------------------------------------------------------------


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_is_in_good_position(name):
    group = load_group(str(GROUPS / name), PREC)
    report = group.verify_good_position()
    assert report.ok, str(report)


def test_alt_generators_generate_the_same_group(q3_scaled):
    alt = load_group(str(GROUPS / "q3_scaled_gens_alt.json"), PREC)
    g1, g2 = q3_scaled.gens[1], q3_scaled.gens[2]
    assert alt.gens[1].proj_equal(g1.inverse())
    assert alt.gens[2].proj_equal(g2 @ g1.inverse())


def test_tampered_radius_is_rejected():
    data = json.loads((GROUPS / "q3_plain.json").read_text())
    data["balls"][0]["radius_val"] = 1  # B_1 too large: overlaps others
    with pytest.raises(BadGroupError):
        group_from_json(data, PREC)


def test_report_names_failing_check():
    data = json.loads((GROUPS / "q3_plain.json").read_text())
    data["balls"][0]["center"] = "7"  # gamma_1 no longer maps onto B_1+
    with pytest.raises(BadGroupError) as exc:
        group_from_json(data, PREC)
    assert "gamma_1" in str(exc.value)


def test_parabolic_generator_fails_hyperbolicity():
    data = json.loads((GROUPS / "q3_plain.json").read_text())
    data["generators"][0] = [["1", "1"], ["0", "1"]]
    with pytest.raises(BadGroupError) as exc:
        group_from_json(data, PREC)
    assert "hyperbolic" in str(exc.value)


# -- words --------------------------------------------------------------------


def test_reduce_word():
    assert reduce_word((1, -1)) == ()
    assert reduce_word((1, 2, -2, -1, 2)) == (2,)
    assert reduce_word((1, 2, 1)) == (1, 2, 1)


def test_word_enumeration_counts(q3_plain):
    for n in range(0, 7):
        words = list(q3_plain.reduced_words(n))
        assert len(words) == word_count(2, n)
        assert len(set(words)) == len(words)
        for w in words:
            assert reduce_word(w) == w
    assert word_count(2, 6) == 1457
    assert word_count(3, 6) == 23437


def test_words_of_length(q3_plain):
    assert q3_plain.words_of_length(0) == [()]
    lvl2 = q3_plain.words_of_length(2)
    assert len(lvl2) == 4 * 3
    assert all(len(w) == 2 for w in lvl2)


def test_moebius_of_products(q3_plain):
    g = q3_plain.moebius_of((1, 2, -1))
    h = q3_plain.gens[1] @ q3_plain.gens[2] @ q3_plain.gens[-1]
    assert g.proj_equal(h)
    assert q3_plain.moebius_of(()).proj_equal(q3_plain.gens[1] @ q3_plain.gens[-1])


# -- orbit balls --------------------------------------------------------------


def test_single_letter_word_balls_are_the_domain_balls(q3_plain):
    for i in q3_plain.indices:
        assert q3_plain.word_ball((i,)) == q3_plain.balls[i]


def test_word_balls_nest_and_shrink(q3_plain):
    for w in q3_plain.reduced_words(3, min_len=2):
        B = q3_plain.word_ball(w)
        outer = q3_plain.balls[w[0]]
        assert not B.complement
        assert outer.contains(B.center)
        assert B.radius_val > outer.radius_val


# -- reduction ----------------------------------------------------------------


def test_reduce_point_inverts_known_words(q3_plain):
    rng = random.Random(3)
    desc = q3_plain.desc
    base_points = [INFINITY, desc.from_int(0, PREC), desc.from_int(3, PREC)]
    words = [(1,), (-2,), (1, 2), (2, -1, 2), (-1, -2, 1, 1)]
    for w in words:
        g = q3_plain.moebius_of(w)
        for z0 in base_points:
            word, back = q3_plain.reduce_point(g(z0))
            assert word == w
            if z0 is INFINITY:
                assert back is INFINITY
            else:
                assert back == z0
    del rng


def test_reduce_point_fixes_domain_points(q3_plain):
    z = q3_plain.desc.from_int(7, PREC)
    word, back = q3_plain.reduce_point(z)
    assert word == () and back == z


def test_reduce_divisor_lands_in_domain(q3_plain):
    desc = q3_plain.desc
    g = q3_plain.moebius_of((1, 2))
    h = q3_plain.moebius_of((-2,))
    D = Divisor0([(g(desc.from_int(0, PREC)), 2), (h(INFINITY), -1), (desc.from_int(3, PREC), -1)])
    red = q3_plain.reduce_divisor(D)
    assert red.degree() == 0
    for P, _ in red:
        assert q3_plain.ball_containing(P) is None


def test_reduce_divisor_keeps_reduced_divisors(q3_plain):
    desc = q3_plain.desc
    D = Divisor0([(desc.from_int(0, PREC), 1), (INFINITY, -1)])
    assert q3_plain.reduce_divisor(D) == D


def test_distinct_anchor_units_give_distinct_supports(q3_plain):
    desc = q3_plain.desc
    P = q3_plain.moebius_of((1,))(INFINITY)
    D = Divisor0([(P, 1), (INFINITY, -1)])
    red1 = q3_plain.reduce_divisor(D, unit=desc.from_int(1, PREC))
    red2 = q3_plain.reduce_divisor(D, unit=desc.from_int(2, PREC))
    assert red1.degree() == 0 and red2.degree() == 0
    assert red1 != red2


def test_reduction_refuses_precision_starved_limit_points():
    # 2 is a fixed point of the first generator here; its image under the
    # normalizing map erodes two digits per reduction step and must error
    # out instead of collapsing silently onto a generator pole
    G = load_group(str(GROUPS / "q5_diag.json"), PREC)
    conj = G.conjugated_to_normalize_infinity()
    z = G.normalizing_conjugator()(G.desc.from_int(2, PREC))
    with pytest.raises(PrecisionError):
        conj.reduce_point(z)


# -- interior points and normalization ----------------------------------------


def test_interior_point_and_normalization_flags(q3_plain, q3_scaled):
    assert q3_plain.normalized_infinity()
    assert q3_plain.interior_point() is INFINITY
    z = q3_plain.interior_point(avoid=[INFINITY])
    assert z is not INFINITY and q3_plain.ball_containing(z) is None

    assert not q3_scaled.normalized_infinity()
    w = q3_scaled.interior_point()
    assert w is not INFINITY


def test_conjugation_normalizes_infinity(q3_scaled):
    norm = q3_scaled.conjugated_to_normalize_infinity()
    assert norm.normalized_infinity()
    assert norm.verify_good_position().ok
    # conjugation preserves traces and determinants projectively
    for i in (1, 2):
        a, b = q3_scaled.gens[i], norm.gens[i]
        lhs = a.trace() * a.trace() * b.det()
        rhs = b.trace() * b.trace() * a.det()
        assert lhs == rhs


def test_already_normalized_group_is_untouched(q3_plain):
    assert q3_plain.conjugated_to_normalize_infinity() is q3_plain


# -- serialization ------------------------------------------------------------


def test_group_json_roundtrip(q3_scaled):
    data = group_to_json(q3_scaled)
    again = group_from_json(data, PREC)
    for i in (1, 2):
        assert again.gens[i].proj_equal(q3_scaled.gens[i])
    for i in q3_scaled.indices:
        assert again.balls[i] == q3_scaled.balls[i]


def test_divisor_parsing(q3_plain):
    D = divisor_from_json(
        [
            {"point": "5/2", "mult": 1},
            {"point": "inf", "mult": -2},
            {"point": "7", "mult": 1},
        ],
        q3_plain.desc,
        PREC,
    )
    assert D.degree() == 0
    assert D.contains_infinity()
    assert len(D) == 3
