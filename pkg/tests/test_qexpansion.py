import numpy as np
import pytest

from modgalrep import qexpansion
from modgalrep.modsym import HeckeEigendata


def test_genus_x0():
    # classical table: genus of X_0(p)
    assert qexpansion.genus_x0(11) == 1
    assert qexpansion.genus_x0(17) == 1
    assert qexpansion.genus_x0(19) == 1
    assert qexpansion.genus_x0(23) == 2
    assert qexpansion.genus_x0(37) == 2


def test_base_series_is_one_over_j():
    # u = 1/j = q - 744 q^2 + 356652 q^3 + ...
    p = 2 ** 31 - 1
    u, w = qexpansion.base_series_modp(6, p)
    assert u[0] == 0 and u[1] == 1
    assert u[2] == (-744) % p
    assert u[3] == 356652 % p
    assert u[4] == (-140361152) % p


def test_fit_relation_recovers_toy():
    # v = u/(1-u): relation v*(1-u) - u = 0, i.e. bidegree (1,1)
    p = 10 ** 9 + 7
    B = 64
    u = np.zeros(B, dtype=np.int64)
    u[1] = 1       # u = q
    v = np.ones(B, dtype=np.int64)
    v[0] = 0       # v = q + q^2 + ... = q/(1-q)
    rel = qexpansion.fit_relation(u, v, 1, 1, p)
    # check Phi(u, v) = 0 as series
    from modgalrep.series import ps_mul, _pad
    acc = np.zeros(B, dtype=np.int64)
    for j, row in enumerate(rel):
        term = np.array([1], dtype=np.int64)
        for _ in range(j):
            term = ps_mul(term, v, p, B)
        horner = np.array([int(row[-1]) % p], dtype=np.int64)
        for i in range(len(row) - 2, -1, -1):
            horner = ps_mul(horner, u, p, B)
            horner = _pad(horner, max(1, len(horner)))
            horner[0] = (horner[0] + int(row[i])) % p
        acc = (_pad(acc, B) + ps_mul(term, horner, p, B)) % p
    assert not acc.any()


def test_roots_modp():
    # x^2 - 1 mod 13: roots 1 and 12
    got = sorted(qexpansion.roots_modp([-1, 0, 1], 13))
    assert got == [1, 12]


def eval_poly_modp(poly, root, p):
    acc = 0
    for k, c in enumerate(poly):
        term = (c.numerator % p) * pow(c.denominator % p, p - 2, p)
        acc = (acc + term * pow(root, k, p)) % p
    return acc


def test_expand_level_matches_classical(eig17):
    """Fast expansion vs the exact modular-symbols coefficients mod p."""
    B = 500
    p, orbits = qexpansion.expand_level(eig17, B)
    an = eig17.an_polys(200)
    checked = 0
    for ox in orbits:
        for root, ser in zip(ox.roots, ox.series):
            for n in range(1, 200):
                want = eval_poly_modp(an[n], root, p)
                assert ser[n] % p == want, (n, root)
                checked += 1
    assert checked >= 5 * 199   # every embedding, all 199 coefficients


def test_expand_level_works_at_11(eig11):
    p, orbits = qexpansion.expand_level(eig11, 128)
    an = eig11.an_polys(60)
    ox = orbits[0]
    for root, ser in zip(ox.roots, ox.series):
        for n in range(1, 60):
            assert ser[n] % p == eval_poly_modp(an[n], root, p)
