from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from modgalrep import numeric
from modgalrep.numeric import (RecognitionError, kernel_and_reduce, mag,
                               rational_reconstruct, row_space,
                               solve_complex, workprec)

PREC = 300


@given(st.integers(-10 ** 12, 10 ** 12),
       st.integers(1, 10 ** 6))
@settings(max_examples=80, deadline=None)
def test_rational_reconstruct_roundtrip(num, den):
    fr = Fraction(num, den)
    with workprec(PREC):
        x = mpfr(fr.numerator) / mpfr(fr.denominator)
        got = rational_reconstruct(x, jump=10 ** 8,
                                   tol=mpfr(2) ** -(PREC // 2))
    assert got == fr


def test_rational_reconstruct_rejects_noise():
    with workprec(PREC):
        x = gmpy2.const_pi()
        with pytest.raises(RecognitionError):
            rational_reconstruct(x, jump=10 ** 8,
                                 tol=mpfr(2) ** -(PREC // 2))


def test_kernel_dimensions():
    with workprec(PREC):
        tol = mpfr(2) ** -(PREC // 3)
        # rank-1 3x3 matrix: kernel dim 2
        row = [mpc(1), mpc(2), mpc(-1)]
        mat = [[3 * x for x in row], [5 * x for x in row],
               [mpc(0), mpc(0), mpc(0)]]
        ker = kernel_and_reduce(mat, tol)
        assert ker.dim == 2
        for v in ker.vectors:
            for r in mat:
                s = sum(a * b for a, b in zip(r, v))
                assert mag(s) < tol


def test_solve_complex_exact():
    with workprec(PREC):
        tol = mpfr(2) ** -(PREC // 3)
        A = [[mpc(2), mpc(1)], [mpc(1), mpc(3)]]
        x = solve_complex(A, [mpc(5), mpc(10)], tol)
        assert mag(x[0] - 1) < tol and mag(x[1] - 3) < tol


def test_row_space_rank():
    with workprec(PREC):
        tol = mpfr(2) ** -(PREC // 3)
        rows = [[mpc(1), mpc(0), mpc(2)],
                [mpc(0), mpc(1), mpc(1)],
                [mpc(1), mpc(1), mpc(3)]]  # dependent
        rs = row_space(rows, tol)
        assert rs.dim == 2


def test_workprec_restores():
    before = gmpy2.get_context().precision
    with workprec(1234):
        assert gmpy2.get_context().precision == 1234
    assert gmpy2.get_context().precision == before
