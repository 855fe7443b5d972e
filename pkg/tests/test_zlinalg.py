from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from modgalrep import zlinalg

small_mat = st.lists(
    st.lists(st.integers(-9, 9), min_size=3, max_size=3),
    min_size=3, max_size=4)


@given(small_mat)
@settings(max_examples=40, deadline=None)
def test_left_kernel_annihilates(mat):
    ker = zlinalg.kernel_z(mat)
    ncols = len(mat[0])
    for v in ker:
        for j in range(ncols):
            assert sum(v[i] * mat[i][j] for i in range(len(mat))) == 0


@given(small_mat)
@settings(max_examples=40, deadline=None)
def test_left_kernel_dim_matches_sympy(mat):
    ker = zlinalg.kernel_z(mat)
    M = sympy.Matrix(mat)
    assert len(ker) == M.rows - M.rank()


def test_solveQ_known():
    mat = [[2, 0], [1, 3]]
    sol = zlinalg.solveQ(mat, [1, 2])
    assert sol == [Fraction(1, 2), Fraction(1, 2)]


def test_solveQ_inconsistent():
    assert zlinalg.solveQ([[1, 0], [2, 0]], [1, 3]) is None


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3),
                min_size=3, max_size=3))
@settings(max_examples=30, deadline=None)
def test_charpoly_matches_sympy(mat):
    got = zlinalg.charpolyQ(mat)
    want = sympy.Matrix(mat).charpoly().all_coeffs()  # leading first
    want = [Fraction(int(c)) for c in reversed(want)]
    assert got == want


def test_poly_gcd():
    # (x-1)(x-2) and (x-1)(x-3) share x-1
    a = [2, -3, 1]
    b = [3, -4, 1]
    g = zlinalg.poly_gcdQ(a, b)
    # normalized monic
    assert g[-1] == 1 and len(g) == 2 and g[0] == -1


def test_kernel_modp():
    mat = [[1, 2, 3], [2, 4, 6]]
    ker = zlinalg.kernel_modp(mat, 7)
    assert len(ker) == 2
    for v in ker:
        for row in mat:
            assert sum(a * b for a, b in zip(row, v)) % 7 == 0


def test_squarefree_part():
    # (x-1)^2 (x+2) -> (x-1)(x+2) up to scalar
    import sympy.abc
    x = sympy.abc.x
    poly = sympy.Poly((x - 1) ** 2 * (x + 2), x)
    coeffs = [Fraction(int(c)) for c in reversed(poly.all_coeffs())]
    sf = zlinalg.squarefree_partQ(coeffs)
    want = sympy.Poly((x - 1) * (x + 2), x)
    wc = [Fraction(int(c)) for c in reversed(want.all_coeffs())]
    scale = sf[-1] / wc[-1]
    assert all(c == scale * w for c, w in zip(sf, wc))
