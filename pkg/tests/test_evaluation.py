from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from modgalrep.evaluation import (Evaluator, product_poly, recognise_poly)
from modgalrep.numeric import RecognitionError, mag, workprec

PREC = 300


def test_product_poly_known():
    with workprec(PREC):
        # roots 1, 2, 3: x^3 - 6x^2 + 11x - 6
        poly = product_poly([mpc(1), mpc(2), mpc(3)])
        want = [-6, 11, -6, 1]
        for c, w in zip(poly, want):
            assert mag(c - w) < mpfr(2) ** -250


def test_product_poly_empty():
    with workprec(PREC):
        assert len(product_poly([])) == 1


@given(st.lists(st.fractions(min_value=-50, max_value=50,
                             max_denominator=8),
                min_size=1, max_size=6))
@settings(max_examples=30, deadline=None)
def test_recognise_poly_roundtrip(roots):
    with workprec(PREC):
        rts = [mpc(mpfr(r.numerator)) / mpfr(r.denominator)
               for r in roots]
        poly = product_poly(rts)
        rec = recognise_poly(poly, PREC)
        # compare against exact expansion
        want = [Fraction(1)]
        for r in roots:
            new = [Fraction(0)] * (len(want) + 1)
            for i, c in enumerate(want):
                new[i] += -r * c
                new[i + 1] += c
            want = new
        assert rec == want


def test_recognise_poly_rejects_irrational():
    with workprec(PREC):
        poly = product_poly([gmpy2.sqrt(mpc(2)), mpc(1, 1)])
        with pytest.raises(RecognitionError):
            recognise_poly(poly, PREC)


@pytest.fixture(scope="module")
def eval_setup(ambient11, torsion11):
    with workprec(PREC + 64):
        x1, plane, mu, epst = torsion11.torsion_subspace("delta",
                                                         which=0)
        x2, _, _, _ = torsion11.torsion_subspace("delta", which=1)
        ev = Evaluator(ambient11, PREC, config=1)
        return ev, x1, x2


def test_alpha_depends_only_on_class(eval_setup, ambient11):
    """alpha through different representatives of one class agrees."""
    ev, x1, x2 = eval_setup
    amb = ambient11
    with workprec(PREC + 64):
        w = amb.add(x1, x2)
        a0 = ev.alpha(w)
        # a different representative: -(-(x1+x2))
        w2 = amb.flip(amb.flip(w))
        a1 = ev.alpha(w2)
        # and a third: (x1+x2) + x2 - x2
        w3 = amb.add(amb.add(w, x2), amb.flip(x2))
        a2 = ev.alpha(w3)
        tol = mpfr(2) ** -(PREC // 2)
        assert mag(a0 - a1) < tol * (1 + mag(a0))
        assert mag(a0 - a2) < tol * (1 + mag(a0))


def test_alpha_separates_small_sample(eval_setup, ambient11):
    ev, x1, x2 = eval_setup
    amb = ambient11
    with workprec(PREC + 64):
        vals = [ev.alpha(x1), ev.alpha(x2), ev.alpha(amb.add(x1, x2)),
                ev.alpha(amb.flip(x1))]
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                assert mag(vals[i] - vals[j]) > mpfr(2) ** -(PREC // 4)


def test_galois_pairing_conjugates(eval_setup, ambient11):
    # complex conjugation acts on the plane, so alpha values come in
    # conjugate pairs across the orbit {x, sigma x}
    ev, x1, x2 = eval_setup
    with workprec(PREC + 64):
        a = ev.alpha(x1)
        assert gmpy2.is_finite(a.real) and mag(a) > 0
