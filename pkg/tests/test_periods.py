from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpc, mpfr

from modgalrep import targets
from modgalrep.numeric import mag, workprec
from modgalrep.periods import PeriodLattice, _gauss_quadratic, _legendre

PREC = 300


def reduce_tau(tau):
    """Move tau into (a neighbourhood of) the fundamental domain."""
    for _ in range(200):
        tau = tau - gmpy2.rint(tau.real)
        if abs(tau) >= 1:
            return tau
        tau = -1 / tau
    raise AssertionError("tau reduction did not terminate")


def j_invariant(tau, prec):
    """j(tau) by q-series, using exact E4 and Delta coefficients."""
    pi = gmpy2.const_pi()
    B = max(60, int(float((prec + 60) * gmpy2.log(mpfr(2))
                          / (2 * pi * tau.imag))) + 10)
    e4 = targets.eisenstein_e4(B)
    dl = targets.delta_coeffs(B)
    q = gmpy2.exp(2j * pi * mpc(tau))
    E4 = mpc(0)
    D = mpc(0)
    p = mpc(1)
    for n in range(B):
        E4 += int(e4[n]) * p
        D += int(dl[n]) * p
        p *= q
    return E4 ** 3 / D


def test_legendre_and_gauss():
    assert [_legendre(a, 7) for a in (1, 2, 3, 4, 5, 6)] == \
        [1, 1, -1, 1, -1, -1]
    with workprec(PREC):
        g5 = _gauss_quadratic(5)
        assert mag(g5 - gmpy2.sqrt(mpfr(5))) < mpfr(2) ** -250
        g7 = _gauss_quadratic(7)
        assert mag(g7 - mpc(0, gmpy2.sqrt(mpfr(7)))) < mpfr(2) ** -250


def test_lattice_is_curve_11a(lattice11):
    """X_1(11) is the elliptic curve 11a3, j = -4096/11.

    The period matrix rows must span the period lattice of a curve with
    that j-invariant; this pins down every sign and normalization in
    the winding-integral machinery at once.
    """
    with workprec(PREC):
        w1 = lattice11.matrix[0][0]
        w2 = lattice11.matrix[1][0]
        tau = reduce_tau(w1 / w2)
        if tau.imag < 0:
            tau = reduce_tau(w2 / w1)
        j = j_invariant(tau, PREC)
        want = mpfr(-4096) / 11
        assert mag(j - want) < mpfr(2) ** -(PREC - 80), (j, want)


def test_hecke_equivariance(lattice11):
    # adjointness of T_n across the integration pairing, n <= 10
    with workprec(PREC):
        for n in (2, 3, 4, 5, 6, 7, 9, 10):
            res = lattice11.equivariance_residual(n)
            assert res < mpfr(2) ** -(PREC // 2), (n, res)


def test_two_route_agreement(eig11, level11):
    """Recomputing with a different winding prime set must agree."""

    class AltLattice(PeriodLattice):
        WINDING_CANDIDATES = (3, 5, 7, 13)

    with workprec(PREC):
        alt = AltLattice(eig11, level11, PREC)
        base = PeriodLattice(eig11, level11, PREC)
        assert alt.winding_primes != base.winding_primes
        scale = max(mag(z) for row in base.matrix for z in row)
        for r1, r2 in zip(base.matrix, alt.matrix):
            for a, b in zip(r1, r2):
                assert mag(a - b) / scale < mpfr(2) ** -(PREC // 2)


def test_torsion_targets_are_nonlattice(lattice11):
    # the torsion vectors z satisfy ell*z in lattice but z not in it
    with workprec(PREC):
        zs, plane, mu, epst = lattice11.torsion_point("delta")
        assert len(zs) == 2
        tau11 = targets.delta_coeffs(10)
        assert mu[2] == tau11[2] % 11 == 9
