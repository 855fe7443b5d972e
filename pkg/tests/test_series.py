from fractions import Fraction

import gmpy2
import numpy as np
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from modgalrep import series
from modgalrep.numeric import mag, workprec

P = 10 ** 9 + 7


def test_ps_mul_known():
    got = series.ps_mul([1, 2, 3], [4, 5], P, 4)
    assert list(got) == [4, 13, 22, 15]


def test_ps_mul_truncates():
    got = series.ps_mul([1] * 10, [1] * 10, P, 5)
    assert list(got) == [1, 2, 3, 4, 5]


@given(st.lists(st.integers(0, P - 1), min_size=1, max_size=40))
@settings(max_examples=40, deadline=None)
def test_ps_inv_roundtrip(a):
    if a[0] % P == 0:
        a = [1] + a[1:]
    n = len(a) + 5
    inv = series.ps_inv(a, P, n)
    prod = series.ps_mul(a, inv, P, n)
    assert prod[0] == 1 and not any(prod[1:])


@given(st.lists(st.integers(0, P - 1), min_size=1, max_size=25),
       st.integers(2, 5))
@settings(max_examples=30, deadline=None)
def test_nth_root_roundtrip(tail, o):
    v = [1] + tail
    n = len(v) + 4
    r = series.ps_nth_root(v, o, P, n)
    back = series._ps_pow(r, o, P, n)
    want = series._pad(np.asarray(v, dtype=np.int64), n) % P
    assert list(series._pad(back, n)) == list(want)


def test_sqrt_binomial_coefficients():
    # (1+q)^(1/2) mod P: coefficients are C(1/2, n) mod P
    n = 8
    r = series.ps_nth_root([1, 1] + [0] * (n - 2), 2, P, n)
    c = Fraction(1)
    for k in range(n):
        if k > 0:
            c *= (Fraction(1, 2) - (k - 1)) / k
        want = (c.numerator * pow(c.denominator, P - 2, P)) % P
        assert r[k] == want


def test_newton_root_sqrt_relation():
    # Phi(U, V) = V^2 - U with U = 1 + q: V = (1+q)^(1/2)
    B = 40
    phi = [[0, -1], [0, 0], [1, 0]]   # phi[j][i] coeff of U^i V^j
    u = [1, 1] + [0] * (B + 6)
    seed = series.ps_nth_root(u, 2, P, 12)   # short correct segment
    v = series.series_newton_root(phi, u, seed, B, P)
    want = series.ps_nth_root(u, 2, P, B)
    assert list(v[:B]) == list(want[:B])


def test_newton_root_bad_seed():
    phi = [[0, -1], [0, 0], [1, 0]]
    u = [1, 1] + [0] * 46
    bad = [1] + [7] * 11     # wrong past the constant term
    with pytest.raises(series.BadSeedError):
        series.series_newton_root(phi, u, bad, 40, P)


def test_cs_eval_geometric():
    with workprec(200):
        c = [mpc(1)] * 30
        q = mpc("0.25")
        v = series.cs_eval(c, q)
        want = (1 - q ** 30) / (1 - q)
        assert mag(v - want) < mpfr(2) ** -170


def test_cs_mul_matches_ps_mul():
    with workprec(200):
        a = [mpc(3), mpc(-2), mpc(7)]
        b = [mpc(1), mpc(5)]
        got = series.cs_mul(a, b, 4)
        assert [int(gmpy2.rint(c.real)) for c in got] == [3, 13, -3, 35]
