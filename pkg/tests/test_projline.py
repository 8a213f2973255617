import random
from fractions import Fraction

import pytest

from schottky_theta.localfield import Qp
from schottky_theta.projline import (
    INFINITY,
    Ball,
    BoundaryPoleError,
    Divisor0,
    Moebius,
    UndefinedCrossRatioError,
    ball_image,
    balls_disjoint,
    ball_to_text,
    cross_ratio,
    identity_moebius,
    pair_divisors,
    parse_ball,
)

Q3 = Qp(3)
Q5 = Qp(5)
PREC = 30


def elt(K, r):
    return K.from_fraction(Fraction(r), PREC)


def mob(K, rows):
    return Moebius.from_rationals(K, rows, PREC)


def random_moebius(K, rng):
    while True:
        rows = [[rng.randint(-40, 40) for _ in range(2)] for _ in range(2)]
        try:
            return mob(K, rows)
        except ValueError:
            continue


def random_point(K, rng):
    if rng.random() < 0.1:
        return INFINITY
    num = rng.randint(-200, 200)
    den = rng.choice([1, 1, 1, K.p, K.p**2, 7])
    return elt(K, Fraction(num, den))


# -- Moebius maps -------------------------------------------------------------


def test_moebius_apply_and_inverse():
    g = mob(Q3, [[2, 1], [1, 1]])
    z = elt(Q3, 5)
    w = g(z)
    assert w == elt(Q3, Fraction(11, 6))
    assert g.inverse()(w) == z
    assert g(INFINITY) == elt(Q3, 2)
    assert g.pole() == elt(Q3, -1)
    assert g(g.pole()) is INFINITY
    h = g.inverse() @ g
    assert h.proj_equal(identity_moebius(Q3, PREC))


def test_derivative_factor():
    g = mob(Q3, [[2, 1], [1, 1]])
    # g'(z) = det/(cz+d)^2 = 1/(z+1)^2
    assert g.derivative_factor(elt(Q3, 2)) == elt(Q3, Fraction(1, 9))
    assert g.derivative_factor(INFINITY) == elt(Q3, 1)
    aff = mob(Q3, [[3, 1], [0, 1]])
    with pytest.raises(ZeroDivisionError):
        aff.derivative_factor(INFINITY)


def test_projective_equality_ignores_scaling():
    g = mob(Q3, [[2, 1], [1, 1]])
    assert g.proj_equal(g.scaled(elt(Q3, Fraction(7, 9))))
    assert not g.proj_equal(mob(Q3, [[2, 1], [1, 2]]))


# -- balls --------------------------------------------------------------------


def test_ball_membership_all_four_kinds():
    c = elt(Q3, 0)
    rv = Fraction(1)
    open_disk = Ball(c, rv)                      # v > 1
    closed_disk = open_disk.closure()            # v >= 1
    comp_open = closed_disk.set_complement()     # v < 1, plus inf
    comp_closed = open_disk.set_complement()     # v <= 1, plus inf

    z_in = elt(Q3, 9)     # v = 2
    z_on = elt(Q3, 3)     # v = 1
    z_out = elt(Q3, 1)    # v = 0

    assert z_in in open_disk and z_on not in open_disk and z_out not in open_disk
    assert z_in in closed_disk and z_on in closed_disk and z_out not in closed_disk
    assert z_in not in comp_open and z_on not in comp_open and z_out in comp_open
    assert z_in not in comp_closed and z_on in comp_closed and z_out in comp_closed
    assert INFINITY in comp_open and INFINITY in comp_closed
    assert INFINITY not in open_disk and INFINITY not in closed_disk
    assert open_disk.on_boundary(z_on) and not open_disk.on_boundary(z_in)


def test_ball_equality_absorbs_equivalent_centers():
    rv = Fraction(2)
    A = Ball(elt(Q3, 0), rv, closed=True)
    B = Ball(elt(Q3, 27), rv, closed=True)   # 27 is in A+
    C = Ball(elt(Q3, 9), rv, closed=True)    # on the sphere: still the same closed ball
    assert A == B and A == C
    assert Ball(elt(Q3, 0), rv) != Ball(elt(Q3, 9), rv)   # open balls: sphere center differs
    assert Ball(elt(Q3, 0), rv) == Ball(elt(Q3, 27), rv)


def test_boundary_point():
    B = Ball(elt(Q3, 2), Fraction(4))
    z = B.boundary_point()
    assert B.on_boundary(z)
    z2 = B.boundary_point(unit=elt(Q3, 4))
    assert B.on_boundary(z2) and z2 != z


def test_balls_disjoint_cases():
    # two proper disks
    assert balls_disjoint(Ball(elt(Q5, 2), 1, closed=True), Ball(elt(Q5, 3), 1, closed=True))
    assert not balls_disjoint(Ball(elt(Q5, 2), 1, closed=True), Ball(elt(Q5, 2 + 25), 1))
    # nested
    assert not balls_disjoint(Ball(elt(Q5, 0), 1), Ball(elt(Q5, 0), 3))
    # disk against complement ball
    comp = Ball(elt(Q5, 0), Fraction(-3), True, False)   # P1 - B(0, 5^3)+
    assert balls_disjoint(comp, Ball(elt(Q5, 0), -3, closed=True))
    assert balls_disjoint(comp, Ball(elt(Q5, 0), -1, closed=True))
    assert not balls_disjoint(comp, Ball(elt(Q5, 0), -4, closed=True))
    far = Ball(elt(Q5, Fraction(1, 5**4)), 0, closed=True)  # center outside D
    assert not balls_disjoint(comp, far)
    # two complement balls always share infinity
    assert not balls_disjoint(comp, Ball(elt(Q5, 1), 5, True, True))


def test_ball_text_roundtrip():
    cases = [
        Ball(elt(Q3, 18), Fraction(4)),
        Ball(elt(Q3, 18), Fraction(4), closed=True),
        Ball(elt(Q3, 0), Fraction(1), True, False),
        Ball(elt(Q3, 0), Fraction(-2), True, True),
    ]
    for B in cases:
        s = ball_to_text(B)
        C = parse_ball(s, Q3, PREC)
        assert C.complement == B.complement and C.closed == B.closed
        assert C.radius_val == B.radius_val
        assert C == B
    assert parse_ball("P1 - B(0, 3^-1)+", Q3, PREC).closed is False
    assert parse_ball("P1 - B(0, 3^-1)", Q3, PREC).closed is True
    assert parse_ball("B(2, 3^-4)+", Q3, PREC).closed is True


# -- ball images --------------------------------------------------------------


def test_ball_image_known_mapping():
    # hand-checked: [[73,-144],[24,-47]] sends P1 - B(3, 1/5) onto B(2, 1/5)+
    g = mob(Q5, [[73, -144], [24, -47]])
    X = Ball(elt(Q5, 3), 1).set_complement()        # complement-closed
    img = ball_image(g, X)
    assert img == Ball(elt(Q5, 2), 1, closed=True)
    # and the scaling map z -> 5^6 z sends B(0, 5^3)+ onto B(0, 5^-3)+
    h = mob(Q5, [[5**6, 0], [0, 1]])
    img2 = ball_image(h, Ball(elt(Q5, 0), -3, closed=True))
    assert img2 == Ball(elt(Q5, 0), 3, closed=True)


def test_ball_image_pole_inside_gives_complement():
    g = mob(Q3, [[0, 1], [1, 0]])  # z -> 1/z
    B = Ball(elt(Q3, 0), 1)        # pole 0 strictly inside
    img = ball_image(g, B)
    assert img.complement and not img.closed
    assert img.radius_val == Fraction(-1)
    assert INFINITY in img
    assert elt(Q3, Fraction(1, 9)) in img   # image of 9
    assert elt(Q3, 9) not in img            # preimage 1/9 lies outside B


def test_ball_image_membership_oracle():
    rng = random.Random(7)
    for _ in range(40):
        g = random_moebius(Q3, rng)
        c = elt(Q3, rng.randint(-50, 50))
        rv = Fraction(rng.randint(-3, 4))
        B = Ball(c, rv, closed=bool(rng.getrandbits(1)))
        if rng.random() < 0.4:
            B = B.set_complement()
        try:
            img = ball_image(g, B)
        except BoundaryPoleError:
            continue
        for _ in range(25):
            z = random_point(Q3, rng)
            w = g(z)
            assert B.contains(z) == img.contains(w), (g, B, img, z)


def test_ball_image_functorial():
    rng = random.Random(11)
    for _ in range(20):
        g = random_moebius(Q5, rng)
        h = random_moebius(Q5, rng)
        B = Ball(elt(Q5, rng.randint(-20, 20)), Fraction(rng.randint(-2, 3)))
        try:
            one_shot = ball_image(g @ h, B)
            two_step = ball_image(g, ball_image(h, B))
            round_trip = ball_image(g.inverse(), ball_image(g, B))
        except BoundaryPoleError:
            continue
        assert one_shot == two_step
        assert round_trip == B


def test_ball_image_boundary_pole_error():
    g = mob(Q3, [[0, 1], [1, 0]])
    B = Ball(elt(Q3, 1), 0)  # pole at 0, v(0-1) = 0 = radius valuation
    with pytest.raises(BoundaryPoleError):
        ball_image(g, B)


# -- cross-ratio --------------------------------------------------------------


def test_cross_ratio_formula():
    z, w, a, b = (elt(Q3, t) for t in (2, 5, 7, 11))
    got = cross_ratio(z, w, a, b)
    assert got == elt(Q3, Fraction((2 - 7) * (5 - 11), (2 - 11) * (5 - 7)))


def test_cross_ratio_degenerate_rules():
    z, w, a, b = (elt(Q3, t) for t in (2, 5, 7, 11))
    one = elt(Q3, 1)
    assert cross_ratio(z, z, a, b) == one
    assert cross_ratio(z, w, a, a) == one
    assert cross_ratio(z, w, z, b).is_zero()
    assert cross_ratio(z, w, a, w).is_zero()
    assert cross_ratio(z, w, a, z) is INFINITY
    assert cross_ratio(z, w, w, b) is INFINITY
    with pytest.raises(UndefinedCrossRatioError):
        cross_ratio(a, b, a, b)
    with pytest.raises(UndefinedCrossRatioError):
        cross_ratio(b, a, a, b)


def test_cross_ratio_infinity_slots():
    z, w, a, b = (elt(Q5, t) for t in (2, 5, 7, 11))
    assert cross_ratio(INFINITY, w, a, b) == (w - b) / (w - a)
    assert cross_ratio(z, INFINITY, a, b) == (z - a) / (z - b)
    assert cross_ratio(z, w, INFINITY, b) == (w - b) / (z - b)
    assert cross_ratio(z, w, a, INFINITY) == (z - a) / (w - a)
    assert cross_ratio(INFINITY, w, INFINITY, b).is_zero()
    assert cross_ratio(INFINITY, INFINITY, a, b) == 1


def test_cross_ratio_pgl2_invariant():
    rng = random.Random(23)
    for _ in range(60):
        g = random_moebius(Q3, rng)
        pts = []
        while len(pts) < 4:
            q = random_point(Q3, rng)
            if not any((q is r) if (q is INFINITY or r is INFINITY) else q == r for r in pts):
                pts.append(q)
        z, w, a, b = pts
        lhs = cross_ratio(g(z), g(w), g(a), g(b))
        rhs = cross_ratio(z, w, a, b)
        assert lhs == rhs


# -- divisors and the multiplicative pairing ----------------------------------


def test_divisor_merging_and_degree():
    a, b, c = (elt(Q3, t) for t in (1, 2, 3))
    D = Divisor0([(a, 1), (b, -2), (a, 0), (b, 1), (c, 0)])
    assert len(D) == 2
    with pytest.raises(ValueError):
        Divisor0([(a, 1)])
    merged = Divisor0([(a, 1), (elt(Q3, 1), -1)])
    assert len(merged) == 0


def test_pairing_matches_cross_ratio():
    z, w, a, b = (elt(Q3, t) for t in (2, 5, 7, 11))
    D = Divisor0([(z, 1), (w, -1)])
    E = Divisor0([(a, 1), (b, -1)])
    assert pair_divisors(D, E) == cross_ratio(z, w, a, b)


def test_pairing_symmetry_and_bilinearity():
    rng = random.Random(5)
    pts = [elt(Q3, Fraction(rng.randint(-99, 99), rng.choice([1, 2, 9]))) for _ in range(6)]
    z, w, a, b, u, v = pts
    D = Divisor0([(z, 1), (w, -1)])
    E = Divisor0([(a, 1), (b, -1)])
    F = Divisor0([(u, 2), (v, -2)])
    assert pair_divisors(D, E) == pair_divisors(E, D)
    lhs = pair_divisors(D, E + F)
    rhs = pair_divisors(D, E) * pair_divisors(D, F)
    assert lhs == rhs


def test_pairing_invariant_under_moebius():
    rng = random.Random(31)
    for _ in range(25):
        g = random_moebius(Q5, rng)
        pts = []
        while len(pts) < 4:
            q = random_point(Q5, rng)
            if q is INFINITY:
                continue
            if not any(q == r for r in pts):
                pts.append(q)
        z, w, a, b = pts
        D = Divisor0([(z, 1), (w, -1)])
        E = Divisor0([(a, 1), (b, -1)])
        assert pair_divisors(D.translate(g), E.translate(g)) == pair_divisors(D, E)


def test_pairing_drops_infinity_factors():
    z, a, b = (elt(Q3, t) for t in (2, 7, 11))
    D = Divisor0([(z, 1), (INFINITY, -1)])
    E = Divisor0([(a, 1), (b, -1)])
    assert pair_divisors(D, E) == (z - a) / (z - b)


def test_pairing_rejects_overlap():
    z, w, b = (elt(Q3, t) for t in (2, 5, 11))
    D = Divisor0([(z, 1), (w, -1)])
    E = Divisor0([(z, 1), (b, -1)])
    with pytest.raises(UndefinedCrossRatioError):
        pair_divisors(D, E)
