from fractions import Fraction
from pathlib import Path

import pytest

from schottky_theta.bounds import (
    BoundsData,
    compute_bounds,
    compute_n_gamma,
    delta_val_of_divisor,
    delta_val_of_point,
    diameter_val,
    nu_for_target,
    tail_valuation,
)
from schottky_theta.projline import INFINITY, Divisor0
from schottky_theta.schottky import load_group

GROUPS = Path(__file__).resolve().parent.parent / "groups"
PREC = 60


@pytest.fixture(scope="module")
def q3_plain():
    return load_group(str(GROUPS / "q3_plain.json"), PREC)


@pytest.fixture(scope="module")
def q3_bounds(q3_plain):
    return compute_bounds(q3_plain)


def test_n_gamma_is_one_for_proper_ball_systems(q3_plain):
    assert compute_n_gamma(q3_plain) == 1


def test_n_gamma_scan_past_level_one():
    group = load_group(str(GROUPS / "q3_scaled_gens.json"), PREC)
    # level 1 contains a complement ball, so the scan must go further; at
    # level 2 the only candidates are gamma_{-2} B_j, and infinity lies in
    # gamma_{-2} B_j iff gamma_2(inf) lies in B_j, which fails for all j
    g2inf = group.gens[2](INFINITY)
    for j in (1, -1, -2):
        assert not group.balls[j].contains(g2inf)
    assert compute_n_gamma(group) == 2


def test_contraction_values_frozen(q3_bounds):
    assert q3_bounds.n_gamma == 1
    assert q3_bounds.rho_val == Fraction(2)
    assert q3_bounds.c_val == Fraction(0)
    assert len(q3_bounds.table) == 4


def test_radius_law_holds_through_length_five(q3_plain, q3_bounds):
    # r(gamma) <= C rho^len, i.e. r_v >= c_val + len * rho_val
    for n in range(1, 6):
        for w in q3_plain.words_of_length(n):
            rv = q3_plain.word_ball(w).radius_val
            assert rv >= q3_bounds.c_val + n * q3_bounds.rho_val


def test_rho_is_a_contraction(q3_bounds):
    assert q3_bounds.rho_val > 0


def test_delta_of_infinity_is_one(q3_bounds):
    assert delta_val_of_point(INFINITY, q3_bounds) == 0


def test_delta_against_direct_scan(q3_plain, q3_bounds):
    z = q3_plain.desc.from_int(0, PREC)
    # distances from 0 to the four ball centers 4, 1, 5, 2: all valuation 0
    assert delta_val_of_point(z, q3_bounds) == 0
    w = q3_plain.desc.from_int(7, PREC)
    # 7 - 4 = 3 has valuation 1, the rest valuation 0; max v is 1
    assert delta_val_of_point(w, q3_bounds) == -1
    D = Divisor0([(z, 1), (w, -1)])
    assert delta_val_of_divisor(D, q3_bounds) == -1


def test_diameter(q3_plain):
    z = q3_plain.desc.from_int(0, PREC)
    w = q3_plain.desc.from_int(9, PREC)
    D = Divisor0([(z, 1), (w, -1)])
    assert diameter_val(D) == Fraction(2)
    E = Divisor0([(z, 1), (INFINITY, -1)])
    assert diameter_val(E) is None


def test_nu_grows_linearly_in_digits(q3_plain, q3_bounds):
    z = q3_plain.desc.from_int(0, PREC)
    D = Divisor0([(z, 1), (INFINITY, -1)])
    nu10 = nu_for_target(10, D, q3_bounds)
    nu200 = nu_for_target(200, D, q3_bounds)
    assert nu10 == 5
    assert nu200 == 100
    assert nu_for_target(1, D, q3_bounds) == 2  # floor at max(2, n_gamma)


def test_nu_accounts_for_divisor_geometry(q3_plain, q3_bounds):
    z = q3_plain.desc.from_int(0, PREC)
    w = q3_plain.desc.from_int(7, PREC)
    D = Divisor0([(z, 1), (w, -1)])
    # x = c_val + R_D + 2 delta = 0 + 0 + 2*(-1) = -2, so nu = ceil((m+2)/2)
    assert nu_for_target(10, D, q3_bounds) == 6
    assert tail_valuation(6, D, q3_bounds) == Fraction(10)


def test_bounds_data_is_frozen(q3_bounds):
    assert isinstance(q3_bounds, BoundsData)
    with pytest.raises(AttributeError):
        q3_bounds.n_gamma = 3
