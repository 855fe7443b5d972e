"""Pure numpy number-theoretic transforms for exact polynomial products.

Three NTT-friendly primes below 2**30 whose product exceeds 2**89 let us
recover any convolution of word-sized residues exactly by Chinese
remainders.  All intermediates fit in int64 (products of two residues
stay under 2**60), so the transforms are fully vectorised.  This is the
fallback used when the compiled twin is unavailable.
"""

import numpy as np

# p = c * 2^k + 1, primitive root given; k >= 23 so lengths up to 2^23 work
NTT_PRIMES = (998244353, 754974721, 167772161)
_ROOTS = {998244353: 3, 754974721: 11, 167772161: 3}

BACKEND = "numpy"


def _powers(w, count, p):
    """[w^0, w^1, ..., w^(count-1)] mod p, vectorised."""
    idx = np.arange(count, dtype=np.int64)
    out = np.ones(count, dtype=np.int64)
    wp = w % p
    bit = 1
    while bit < count:
        mask = (idx & bit) != 0
        out[mask] = out[mask] * wp % p
        wp = wp * wp % p
        bit <<= 1
    return out


def _bitrev_permute(a):
    n = len(a)
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return a[rev]


def _ntt(a, p, root, invert=False):
    """Radix-2 NTT of int64 array a; len(a) must be a power of 2."""
    n = len(a)
    a = _bitrev_permute(a)
    length = 2
    while length <= n:
        w = pow(root, (p - 1) // length, p)
        if invert:
            w = pow(w, p - 2, p)
        half = length >> 1
        ws = _powers(w, half, p)
        a2 = a.reshape(-1, length)
        lo = a2[:, :half].copy()
        t = a2[:, half:] * ws % p
        a2[:, :half] = (lo + t) % p
        a2[:, half:] = (lo - t) % p
        length <<= 1
    if invert:
        ninv = pow(n, p - 2, p)
        a = a * ninv % p
    return a


def _convolve_mod(a, b, p, n):
    root = _ROOTS[p]
    fa = np.zeros(n, dtype=np.int64)
    fb = np.zeros(n, dtype=np.int64)
    fa[:len(a)] = a % p
    fb[:len(b)] = b % p
    fa = _ntt(fa, p, root)
    fb = _ntt(fb, p, root)
    fc = fa * fb % p
    return _ntt(fc, p, root, invert=True)


def polymul_mod(a, b, p):
    """Exact product of integer sequences a, b, coefficients reduced mod p.

    Requires 1 < p < 2**31.  Inputs are reduced mod p first; the true
    convolution of the reduced inputs is below len * p**2 < 2**89, which
    the three-prime CRT covers for lengths up to 2**23.
    """
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    need = len(a) + len(b) - 1
    n = 1
    while n < need:
        n <<= 1
    p1, p2, p3 = NTT_PRIMES
    if min(len(a), len(b)) * (p - 1) ** 2 < p1:
        return _convolve_mod(a, b, p1, n)[:need] % p
    r1 = _convolve_mod(a, b, p1, n)[:need]
    r2 = _convolve_mod(a, b, p2, n)[:need]
    r3 = _convolve_mod(a, b, p3, n)[:need]
    # Garner: X = x1 + x2*p1 + x3*p1*p2 with the x_i below computed in int64
    inv_p1_p2 = pow(p1, p2 - 2, p2)
    inv_p12_p3 = pow(p1 * p2 % p3, p3 - 2, p3)
    x2 = (r2 - r1) % p2 * inv_p1_p2 % p2
    v12 = r1 + x2 * p1                      # < p1*p2 < 2**60, exact in int64
    x3 = (r3 - v12 % p3) % p3 * inv_p12_p3 % p3
    return (v12 % p + (x3 % p) * (p1 * p2 % p) % p) % p
