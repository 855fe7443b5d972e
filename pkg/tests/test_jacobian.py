import random

import gmpy2
import pytest
from gmpy2 import mpc, mpfr

from modgalrep.numeric import workprec

PREC = 300


def random_class(amb, rng):
    """A random divisor class from 2g+1 random disk points."""
    cusps = amb.level.all_cusps
    pts = []
    for i in range(2 * amb.g + 1):
        cusp = cusps[rng.randrange(len(cusps))]
        r = 0.08 + 0.2 * rng.random()
        th = 2 * gmpy2.const_pi() * mpfr(rng.random())
        pts.append((cusp, mpc(mpfr(r)) * mpc(gmpy2.cos(th),
                                             gmpy2.sin(th))))
    return amb.subspace_from_points(pts)


def test_dimensions(ambient11):
    g = ambient11.g
    assert ambient11.dimV == 5 * g + 4
    assert ambient11.W0.dim == 3 * g + 3
    assert ambient11.V2.dim == g + 2


def test_identity_is_zero_class(ambient11):
    with workprec(PREC):
        assert ambient11.is_class_zero(ambient11.W0)


def test_group_laws(ambient11):
    amb = ambient11
    rng = random.Random(11)
    with workprec(PREC):
        A = random_class(amb, rng)
        B = random_class(amb, rng)
        C = random_class(amb, rng)
        # commutativity
        assert amb.class_eq(amb.add(A, B), amb.add(B, A))
        # associativity
        assert amb.class_eq(amb.add(amb.add(A, B), C),
                            amb.add(A, amb.add(B, C)))
        # identity
        assert amb.class_eq(amb.add(A, amb.W0), A)
        # inverse
        assert amb.is_class_zero(amb.add(A, amb.flip(A)))
        # negation is an involution
        assert amb.class_eq(amb.flip(amb.flip(A)), A)


def test_addflip_is_negated_sum(ambient11):
    amb = ambient11
    rng = random.Random(7)
    with workprec(PREC):
        A = random_class(amb, rng)
        B = random_class(amb, rng)
        # addflip(A, B) = -(A+B): adding A+B back gives zero
        s = amb.addflip(A, B)
        assert amb.is_class_zero(amb.add(s, amb.add(A, B)))


def test_scalar_mul_consistency(ambient11):
    amb = ambient11
    rng = random.Random(23)
    with workprec(PREC):
        A = random_class(amb, rng)
        three = amb.add(amb.add(A, A), A)
        assert amb.class_eq(amb.scalar_mul(A, 3), three)
        assert amb.class_eq(amb.double(A), amb.add(A, A))
        assert amb.is_class_zero(amb.add(amb.scalar_mul(A, 2),
                                         amb.scalar_mul(A, -2)))


def test_class_eq_distinguishes(ambient11):
    amb = ambient11
    rng = random.Random(5)
    with workprec(PREC):
        A = random_class(amb, rng)
        B = random_class(amb, rng)
        # two independent random classes are distinct with prob 1
        assert not amb.class_eq(A, B)
        assert not amb.is_class_zero(A)
