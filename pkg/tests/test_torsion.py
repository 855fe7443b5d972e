import gmpy2
import pytest
from gmpy2 import mpfr

from modgalrep.numeric import workprec

PREC = 300


@pytest.fixture(scope="module")
def torsion_pair(torsion11):
    x1, plane, mu, epst = torsion11.torsion_subspace("delta", which=0)
    x2, _, _, _ = torsion11.torsion_subspace("delta", which=1)
    return x1, x2, plane, mu


def test_is_ell_torsion(torsion11, torsion_pair):
    amb = torsion11.amb
    x1, x2, _, _ = torsion_pair
    with workprec(PREC + 64):
        for x in (x1, x2):
            assert not amb.is_class_zero(x)
            assert amb.is_class_zero(amb.scalar_mul(x, 11))


def test_independent(torsion11, torsion_pair):
    amb = torsion11.amb
    x1, x2, _, _ = torsion_pair
    with workprec(PREC + 64):
        # a few combinations a*x1 + b*x2 != 0 (full sweep is in the
        # acceptance gate)
        for a, b in ((1, 1), (1, 10), (2, 3), (0, 1), (1, 0)):
            c = amb.add(amb.scalar_mul(x1, a), amb.scalar_mul(x2, b)) \
                if a and b else (amb.scalar_mul(x1, a) if a
                                 else amb.scalar_mul(x2, b))
            assert not amb.is_class_zero(c), (a, b)


def test_lattice_reduction(torsion11):
    with workprec(PREC + 64):
        g = torsion11.g
        lat = torsion11.lat
        # z = lattice vector must reduce to ~0
        z = [lat.matrix[0][s] + 3 * lat.matrix[1][s] for s in range(g)]
        red = torsion11.reduce_mod_lattice(z)
        from modgalrep.numeric import mag
        assert all(mag(t) < mpfr(2) ** -(PREC - 80) for t in red)


def test_newton_inverts_aj(torsion11):
    with workprec(PREC + 64):
        # pick a small target, invert, and check the forward map
        g = torsion11.g
        target = [t / 97 for t in torsion11.lat.matrix[0][:g]]
        qs = torsion11.newton_invert(target)
        got = torsion11.aj_diff(qs)
        from modgalrep.numeric import mag
        assert all(mag(a - b) < mpfr(2) ** -(PREC - 20)
                   for a, b in zip(got, target))
