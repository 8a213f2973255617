import math
import random
from fractions import Fraction

import pytest

from schottky_theta.localfield import Qp
from schottky_theta.tate import (
    CompositionTable,
    NotUnitBallMapError,
    TateSeries,
    moebius_to_unit_series,
)

P = 3
DIGITS = 40
CAP = 48


def S(coeffs, tail=math.inf):
    return TateSeries(P, DIGITS, CAP, coeffs, tail)


def F(r, prec=DIGITS):
    return Qp(P).from_fraction(Fraction(r), prec)


def random_unit_series(rng, min_val=0, length=12):
    coeffs = [1] + [rng.randrange(0, P ** (DIGITS - 5)) * P**min_val for _ in range(length)]
    return S(coeffs)


# -- ring operations ----------------------------------------------------------


def test_mul_identity_and_small_product():
    A = S([1, 7, 5])
    assert (TateSeries.one(P, DIGITS, CAP) * A).coeffs == A.coeffs
    lhs = S([1, P]) * S([1, -P])
    assert lhs.coeffs == S([1, 0, -(P**2)]).coeffs


def test_mul_matches_schoolbook_convolution():
    rng = random.Random(2)
    for _ in range(20):
        a = [rng.randrange(0, P**10) for _ in range(rng.randrange(1, 9))]
        b = [rng.randrange(0, P**10) for _ in range(rng.randrange(1, 9))]
        got = (S(a) * S(b)).coeffs
        n = len(a) + len(b) - 1
        want = [0] * n
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                want[i + j] = (want[i + j] + x * y) % P**DIGITS
        while want and want[-1] == 0:
            want.pop()
        assert got == want


def test_gauss_norm_multiplicative():
    rng = random.Random(5)
    for _ in range(20):
        A = random_unit_series(rng, min_val=rng.randrange(0, 3))
        B = random_unit_series(rng, min_val=rng.randrange(0, 3))
        assert (A * B).gauss_val() == A.gauss_val() + B.gauss_val()


def test_degree_cap_drops_into_tail():
    # t^30 * t^30 exceeds the cap, so the stored product is 0 with tail 0
    A = S([0] * 30 + [1])
    got = A * A
    assert got.coeffs == []
    assert got.tail == 0
    # with high-valuation top coefficients the tail stays informative
    B = S([1] + [0] * 29 + [P**20])
    got2 = B * B
    assert got2.tail == 40


def test_derivative():
    G = S([1, P, P**2])
    assert G.derivative().coeffs == [P, 2 * P**2]


def test_scale_by_unit():
    G = S([1, P, P**3])
    H = G.scale(2)
    assert H.coeffs == [2, 2 * P, 2 * P**3]
    assert H.gauss_val() == G.gauss_val()


# -- evaluation ---------------------------------------------------------------


def test_eval_at_zero_is_constant_term():
    G = S([7, 1, 2])
    assert G.eval(F(0)) == F(7)
    assert G.eval_desc(Qp(P), DIGITS) == F(7)


def test_eval_outside_ball_rejected():
    G = S([1, 1])
    with pytest.raises(ValueError):
        G.eval(F(Fraction(1, P)))


def test_eval_matches_horner_oracle():
    G = S([2, 5, 11])
    t = F(6)
    assert G.eval(t) == F(2 + 5 * 6 + 11 * 36)


def test_derivative_finite_difference_oracle():
    rng = random.Random(9)
    G = random_unit_series(rng, min_val=1)
    t = F(4)
    h = F(P**12)
    fd = (G.eval(t + h) - G.eval(t)) / h
    exact = G.derivative().eval(t)
    assert (fd - exact).valuation() >= 12


# -- fractional linear expansions ---------------------------------------------


def test_moebius_identity_map():
    G = moebius_to_unit_series(F(1), F(0), F(0), F(1), DIGITS, CAP)
    assert G.coeffs == [0, 1]
    assert G.tail == math.inf


def test_moebius_scaling_map():
    G = moebius_to_unit_series(F(P), F(0), F(0), F(1), DIGITS, CAP)
    assert G.coeffs == [0, P]


def test_moebius_geometric_series():
    # t / (p t + 1) = t - p t^2 + p^2 t^3 - ...
    G = moebius_to_unit_series(F(1), F(0), F(P), F(1), DIGITS, CAP)
    mod = P**DIGITS
    for k in range(1, 10):
        assert G.coeff(k) == (-P) ** (k - 1) % mod
    # the value at 1 must match 1/(p+1)
    got = G.eval(F(1))
    want = F(1) / F(P + 1)
    assert (got - want).valuation() >= min(G.tail, DIGITS)


def test_moebius_pole_inside_ball_rejected():
    with pytest.raises(NotUnitBallMapError):
        moebius_to_unit_series(F(1), F(0), F(1), F(1), DIGITS, CAP)
    with pytest.raises(NotUnitBallMapError):
        moebius_to_unit_series(F(1), F(Fraction(1, P)), F(P), F(1), DIGITS, CAP)


# -- composition --------------------------------------------------------------


def test_compose_with_identity():
    G = S([1, 5, 7, 11])
    ident = S([0, 1])
    assert G.compose(ident).coeffs == G.coeffs


def test_compose_simple():
    G = S([1, 1])
    got = G.compose(S([0, P]))
    assert got.coeffs == [1, P]


def test_compose_associative_to_tail():
    rng = random.Random(13)
    for _ in range(5):
        G = random_unit_series(rng, min_val=0, length=8)
        M1 = S([0, 1] + [rng.randrange(0, P**6) * P for _ in range(6)])
        M2 = S([0, 1] + [rng.randrange(0, P**6) * P for _ in range(6)])
        lhs = G.compose(M1).compose(M2)
        rhs = G.compose(M1.compose(M2))
        diff = lhs - rhs
        floor = min(lhs.tail, rhs.tail, DIGITS)
        assert diff.gauss_val() >= floor


def test_perturbation_propagates_through_composition():
    rng = random.Random(21)
    G = random_unit_series(rng, min_val=1)
    e = S([0] + [rng.randrange(0, P**3) * P**5 for _ in range(6)])
    G_pert = G * (TateSeries.one(P, DIGITS, CAP) + e)
    M = S([0, 1, P, P**2])
    diff = G_pert.compose(M) - G.compose(M)
    assert diff.gauss_val() >= 5


def test_composition_table_matches_horner():
    rng = random.Random(31)
    for _ in range(5):
        G = random_unit_series(rng, min_val=0, length=10)
        M = S([0] + [rng.randrange(0, P**8) for _ in range(7)])
        if M.gauss_val() < 0:
            continue
        table = CompositionTable(M, terms=G.degree())
        assert table.compose(G).coeffs == G.compose(M).coeffs


def test_composition_table_scalar_reuse():
    M = S([0, 1, P])
    table = CompositionTable(M, terms=6)
    G1 = S([1, P, 0, P**2])
    G2 = S([2, 0, P**3])
    assert table.compose(G1).coeffs == G1.compose(M).coeffs
    assert table.compose(G2).coeffs == G2.compose(M).coeffs
