from fractions import Fraction

import pytest

from modgalrep import targets


def eta24_mod(B, m):
    """Delta coefficients mod m via the eta product, independently of
    the Eisenstein-series construction in targets."""
    # eta(q)^(1/...) : prod (1 - q^n) by pentagonal numbers
    pent = [0] * B
    pent[0] = 1
    k = 1
    while k * (3 * k - 1) // 2 < B:
        for n in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if n < B:
                pent[n] = (-1) ** k % m
        k += 1
    from modgalrep._kernels import polymul_mod
    # 24th power by squaring: e^8 * e^16
    e = pent
    sq = {1: e}
    for t in (2, 4, 8, 16):
        e = list(polymul_mod(e, e, m)[:B])
        sq[t] = e
    e24 = list(polymul_mod(sq[8], sq[16], m)[:B])
    return [0] + e24[:B - 1]   # shift: Delta = q * prod(...)^24


def test_delta_small_values():
    c = targets.delta_coeffs(12)
    # Ramanujan's table
    assert c[1] == 1 and c[2] == -24 and c[3] == 252
    assert c[5] == 4830 and c[7] == -16744 and c[11] == 534612


def test_delta_against_eta_product():
    B = 3000
    m = 3 ** 7  # some modulus coprime-ish to nothing special
    c = targets.delta_coeffs(B)
    e = eta24_mod(B, m)
    assert all(c[n] % m == e[n] % m for n in range(1, B))


def test_e4delta_small_values():
    c = targets.e4delta_coeffs(8)
    # E4*Delta = q + 216 q^2 - 3348 q^3 + 13888 q^4 + 52110 q^5 + ...
    assert c[1] == 1 and c[2] == 216 and c[3] == -3348
    assert c[4] == 13888 and c[5] == 52110


def test_congruence_691():
    # tau(p) = 1 + p^11 mod 691 at every prime
    c = targets.delta_coeffs(100)
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        assert c[p] % 691 == (1 + pow(p, 11, 691)) % 691


def test_multiplicativity():
    c = targets.delta_coeffs(200)
    assert c[6] == c[2] * c[3]
    assert c[35] == c[5] * c[7]
    # Hecke recursion at p^2: tau(p^2) = tau(p)^2 - p^11
    assert c[4] == c[2] ** 2 - 2 ** 11
    assert c[9] == c[3] ** 2 - 3 ** 11


def test_exceptional_sets():
    assert 691 in targets.EXCEPTIONAL["delta"]
    assert 11 in targets.EXCEPTIONAL["e4delta"]
    assert 11 not in targets.EXCEPTIONAL["delta"]
    assert 17 not in targets.EXCEPTIONAL["e4delta"]
