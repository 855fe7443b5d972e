# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled radix-2 NTT convolution, exact mod p via three-prime CRT.

Same contract as the numpy fallback in _polymul_py, with scalar loops
compiled to C.  All residues stay below 2**30 so products of two of
them fit comfortably in a signed 64-bit word.
"""

import numpy as np
cimport numpy as cnp
cimport cython

cnp.import_array()

cdef long long P1 = 998244353
cdef long long P2 = 754974721
cdef long long P3 = 167772161

NTT_PRIMES = (998244353, 754974721, 167772161)
BACKEND = "cython"

cdef long long _powmod(long long b, long long e, long long m):
    cdef long long r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


cdef long long _root_for(long long p):
    if p == P1:
        return 3
    if p == P2:
        return 11
    return 3


@cython.boundscheck(False)
cdef void _ntt_inplace(long long[::1] a, long long p, bint invert):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, length, half, start
    cdef long long w, wn, t, u, ninv
    # bit reversal
    j = 0
    for i in range(1, n):
        k = n >> 1
        while j & k:
            j ^= k
            k >>= 1
        j |= k
        if i < j:
            t = a[i]; a[i] = a[j]; a[j] = t
    length = 2
    while length <= n:
        wn = _powmod(_root_for(p), (p - 1) // length, p)
        if invert:
            wn = _powmod(wn, p - 2, p)
        half = length >> 1
        start = 0
        while start < n:
            w = 1
            for k in range(half):
                u = a[start + k]
                t = a[start + k + half] * w % p
                a[start + k] = (u + t) % p
                a[start + k + half] = (u - t + p) % p
                w = w * wn % p
            start += length
        length <<= 1
    if invert:
        ninv = _powmod(n, p - 2, p)
        for i in range(n):
            a[i] = a[i] * ninv % p


cdef cnp.ndarray _convolve_mod(cnp.ndarray a, cnp.ndarray b, long long p, Py_ssize_t n):
    cdef cnp.ndarray fa = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray fb = np.zeros(n, dtype=np.int64)
    fa[:len(a)] = a % p
    fb[:len(b)] = b % p
    cdef long long[::1] va = fa
    cdef long long[::1] vb = fb
    _ntt_inplace(va, p, False)
    _ntt_inplace(vb, p, False)
    cdef Py_ssize_t i
    for i in range(n):
        va[i] = va[i] * vb[i] % p
    _ntt_inplace(va, p, True)
    return fa


def polymul_mod(a, b, p):
    """Exact product of integer sequences mod p, 1 < p < 2**31."""
    cdef long long pp = p
    a = np.asarray(a, dtype=np.int64) % pp
    b = np.asarray(b, dtype=np.int64) % pp
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    cdef Py_ssize_t need = len(a) + len(b) - 1
    cdef Py_ssize_t n = 1
    while n < need:
        n <<= 1
    if min(len(a), len(b)) * (int(p) - 1) ** 2 < P1:  # python ints, no overflow
        return _convolve_mod(a, b, P1, n)[:need] % pp
    r1 = _convolve_mod(a, b, P1, n)[:need]
    r2 = _convolve_mod(a, b, P2, n)[:need]
    r3 = _convolve_mod(a, b, P3, n)[:need]
    cdef long long inv_p1_p2 = _powmod(P1, P2 - 2, P2)
    cdef long long inv_p12_p3 = _powmod(P1 * P2 % P3, P3 - 2, P3)
    cdef long long[::1] v1 = r1
    cdef long long[::1] v2 = r2
    cdef long long[::1] v3 = r3
    cdef cnp.ndarray out = np.empty(need, dtype=np.int64)
    cdef long long[::1] vo = out
    cdef long long x2, x3, v12, p12modp = P1 * P2 % pp
    cdef Py_ssize_t i
    for i in range(need):
        x2 = (v2[i] - v1[i]) % P2 * inv_p1_p2 % P2
        if x2 < 0:
            x2 += P2
        v12 = v1[i] + x2 * P1
        x3 = (v3[i] - v12 % P3) % P3 * inv_p12_p3 % P3
        if x3 < 0:
            x3 += P3
        vo[i] = (v12 % pp + x3 % pp * p12modp) % pp
    return out
