import random
from fractions import Fraction

import pytest


from modgalrep import frobenius as fb


def test_subgroup_S():
    # odd part of F_11^*: the squares {1, 3, 4, 5, 9}
    assert fb.subgroup_S(11) == [1, 3, 4, 5, 9]
    # 17 - 1 = 16 is a 2-power: S is trivial
    assert fb.subgroup_S(17) == [1]
    # 19 - 1 = 2 * 9: S has order 9
    S19 = fb.subgroup_S(19)
    assert len(S19) == 9 and all(pow(s, 9, 19) == 1 for s in S19)
    # -1 never lies in S (odd order)
    for ell in (11, 13, 17, 19, 23):
        assert ell - 1 not in fb.subgroup_S(ell)


def test_plane_orbits():
    reps = fb.plane_orbit_reps(11)
    assert len(reps) == (11 ** 2 - 1) // 5
    # distinct orbits partition the 120 nonzero points
    S = fb.subgroup_S(11)
    seen = set()
    for (a, b) in reps:
        orb = {((s * a) % 11, (s * b) % 11) for s in S}
        assert len(orb) == 5
        assert not (orb & seen)
        seen |= orb
    assert len(seen) == 120


def test_gbar_class_partition():
    classes = fb.gbar_classes(11)
    total = sum(len(v) for v in classes.values())
    # |GL_2(F_11)| / |S| cosets in all
    assert total == (11 ** 2 - 1) * (11 ** 2 - 11) // 5
    # identity coset forms a singleton class
    assert (2, 1, True) in classes
    assert len(classes[(2, 1, True)]) == 1


def test_integral_model():
    ft = [Fraction(3, 2), Fraction(-1, 3), Fraction(1)]
    G, d = fb.integral_model(ft)
    assert d == 6
    # G(Y) = d^2 ft(Y/d) = Y^2 - 2 Y + 54
    assert G == [54, -2, 1]


def test_newton_power_sums():
    # roots 1, 2, 3: p_k = 1 + 2^k + 3^k
    p = 10 ** 9 + 7
    G = [-6, 11, -6, 1]
    pows = fb._newton_power_sums(G, p, 6)
    for k in range(6):
        assert pows[k] == (1 + 2 ** k + 3 ** k) % p


def test_powmod_x():
    # a = X in F_p[X]/(X^2 - 2): a^p = X^p = 2^((p-1)/2) X
    p = 101
    G = [-2, 0, 1]
    apow = fb._powmod_x(p, G, p)
    leg = pow(2, (p - 1) // 2, p)
    assert apow == [0, leg]


def test_ddf_degrees_cyclotomic():
    # factor degrees of Phi_5 mod p = multiplicative order of p mod 5
    phi5 = [1, 1, 1, 1, 1]   # 1 + x + x^2 + x^3 + x^4
    for p in (7, 11, 13, 19, 29, 31):
        degs = fb._ddf_degrees(phi5, p)
        if p % 5 == 1:
            order = 1
        else:
            order = next(k for k in (1, 2, 4) if pow(p, k, 5) == 1)
        assert degs == [order] * (4 // order), p


def test_poly_gcd_and_div():
    p = 97
    # (x-1)(x-2) and (x-1)(x-3)
    a = [2, -3, 1]
    b = [3, -4, 1]
    g = fb._gcd_poly(a, b, p)
    assert g == [(-1) % 97, 1]
    q = fb._poly_div_exact(a, g, p)
    # a / (x-1) = (x-2)
    assert q == [(-2) % 97, 1]


def test_refine_roots_quadratic():
    import gmpy2
    from modgalrep.numeric import mag, workprec
    with workprec(600):
        G = [-2, 0, 1]   # X^2 - 2
        r = fb.refine_roots(G, [1.4, -1.4], 500)
        s = gmpy2.sqrt(gmpy2.mpfr(2))
        assert mag(r[0] - s) < gmpy2.mpfr(2) ** -490
        assert mag(r[1] + s) < gmpy2.mpfr(2) ** -490


def test_mat_inv():
    m = (1, 2, 3, 4)
    inv = fb._mat_inv(m, 11)
    a, b, c, d = m
    e, f, g, h = inv
    # m * inv = identity mod 11
    assert ((a * e + b * g) % 11, (a * f + b * h) % 11,
            (c * e + d * g) % 11, (c * f + d * h) % 11) == (1, 0, 0, 1)
