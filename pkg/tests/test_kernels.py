import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modgalrep._kernels import BACKEND, NTT_PRIMES, polymul_mod
from modgalrep._kernels import _polymul_py


def naive(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def test_small_product():
    # (1 + 2q)(3 + q + 4q^2) mod 7
    got = polymul_mod([1, 2], [3, 1, 4], 7)
    assert list(got) == [3, 0, 6, 1]


def test_ntt_primes_structure():
    for p in NTT_PRIMES:
        assert (p - 1) % (1 << 23) == 0   # long power-of-two tails


@given(st.lists(st.integers(0, 10 ** 6), min_size=1, max_size=60),
       st.lists(st.integers(0, 10 ** 6), min_size=1, max_size=60),
       st.sampled_from([2, 11, 97, 2 ** 31 - 1]))
@settings(max_examples=60, deadline=None)
def test_matches_naive(a, b, p):
    assert list(polymul_mod(a, b, p)) == naive(a, b, p)


def test_backends_agree_large():
    rng = np.random.default_rng(3)
    p = 999999937
    a = rng.integers(0, p, 5000)
    b = rng.integers(0, p, 3000)
    assert np.array_equal(polymul_mod(a, b, p),
                          _polymul_py.polymul_mod(a, b, p))


def test_backend_reported():
    assert BACKEND in ("cython", "numpy")
