"""Truncated power series arithmetic.

Mod-p series are numpy int64 arrays of residues; products go through the
NTT kernels above a small crossover and schoolbook below.  Complex
series (local q-expansions at cusps) are plain lists of gmpy2 numbers;
they stay short, so schoolbook products are fine there.
"""

import numpy as np
from gmpy2 import mpc

from ._kernels import polymul_mod

FFT_CROSSOVER = 64


class SingularLiftError(Exception):
    pass


class BadSeedError(Exception):
    pass


class PowerSeries:
    """coeffs[n] is the q^n coefficient; trunc = len(coeffs) is exclusive.

    ring is a tag only ('modp', 'int', 'cyclotomic', 'complex'); the
    arithmetic helpers below don't dispatch on it, callers do.
    """

    def __init__(self, coeffs, ring, modulus=None):
        self.coeffs = coeffs
        self.ring = ring
        self.modulus = modulus

    @property
    def trunc(self):
        return len(self.coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in list(self.coeffs[:6]))
        return "PowerSeries[%s](%s, ... O(q^%d))" % (self.ring, head, self.trunc)


def ps_mul(a, b, p, n):
    """a*b mod p truncated to n terms.  a, b are int arrays."""
    a = np.asarray(a, dtype=np.int64)[:n]
    b = np.asarray(b, dtype=np.int64)[:n]
    if min(len(a), len(b)) < FFT_CROSSOVER:
        la, lb = len(a), len(b)
        out = np.zeros(min(n, la + lb - 1), dtype=np.int64)
        ao = a % p
        bo = b % p
        for i in range(la):
            if ao[i]:
                hi = min(lb, n - i)
                if hi <= 0:
                    break
                out[i:i + hi] = (out[i:i + hi] + ao[i] * bo[:hi]) % p
        return out
    return polymul_mod(a, b, p)[:n]


def ps_inv(a, p, n):
    """Inverse of a mod (p, q^n) by Newton iteration; needs a[0] invertible."""
    a = np.asarray(a, dtype=np.int64) % p
    if len(a) == 0 or a[0] % p == 0:
        raise ZeroDivisionError("constant term not invertible")
    x = np.array([pow(int(a[0]), p - 2, p)], dtype=np.int64)
    k = 1
    while k < n:
        k = min(2 * k, n)
        ax = ps_mul(a[:k], x, p, k)
        two_minus = (-ax) % p
        two_minus[0] = (two_minus[0] + 2) % p
        x = ps_mul(x, two_minus, p, k)
    return x[:n]


def ps_nth_root(v, o, p, n):
    """o-th root of a series with v[0] == 1, mod (p, q^n).

    Newton on x^o - v = 0, branch fixed by the constant term 1.  Needs o
    invertible mod p.
    """
    v = np.asarray(v, dtype=np.int64) % p
    if len(v) == 0 or v[0] % p != 1:
        raise BadSeedError("root extraction needs constant term 1")
    inv_o = pow(o, p - 2, p)
    x = np.array([1], dtype=np.int64)
    k = 1
    while k < n:
        k = min(2 * k, n)
        xo = _pad(_ps_pow(x, o - 1, p, k), k)
        num = (_pad(ps_mul(xo, x, p, k), k) - _pad(v[:k], k)) % p
        den = (o * xo) % p
        corr = ps_mul(num, ps_inv(den, p, k), p, k)
        x = (_pad(x, k) - corr) % p
    return x[:n]


def _pad(a, n):
    if len(a) >= n:
        return a[:n]
    out = np.zeros(n, dtype=np.int64)
    out[:len(a)] = a
    return out


def _ps_pow(a, e, p, n):
    out = np.array([1], dtype=np.int64)
    base = np.asarray(a, dtype=np.int64)[:n]
    while e > 0:
        if e & 1:
            out = ps_mul(out, base, p, n)
        e >>= 1
        if e:
            base = ps_mul(base, base, p, n)
    return out


def series_newton_root(phi, u, v0, B, p):
    """Solve Phi(u, v) = 0 mod (p, q^B) for v, starting from the seed v0.

    phi: 2D int array, phi[j][i] = coefficient of U^i V^j.
    u: int array, the inner series, at least B terms.
    v0: int array, a correct initial segment of the solution.

    Raises BadSeedError when Phi(u, v0) != 0 to the seed order, and
    SingularLiftError when dPhi/dV(u, v0) vanishes identically there.
    u should carry a few terms beyond B to absorb the valuation of
    dPhi/dV at the base point.
    """
    phi = np.asarray(phi, dtype=object)
    u = np.asarray(u, dtype=np.int64) % p
    L = len(u)
    v = np.asarray(v0, dtype=np.int64) % p
    n0 = len(v)
    degv = phi.shape[0] - 1

    # precompute the coefficient series c_j(u) once, at full precision
    cju = []
    for j in range(degv + 1):
        c = np.array([int(x) % p for x in phi[j]], dtype=np.int64)
        # Horner in u
        acc = np.array([c[-1]], dtype=np.int64)
        for i in range(len(c) - 2, -1, -1):
            acc = ps_mul(acc, u, p, L)
            acc = _pad(acc, max(1, len(acc)))
            acc[0] = (acc[0] + c[i]) % p
        cju.append(_pad(acc, L))
    dcju = [(j * cju[j]) % p for j in range(1, degv + 1)]

    def eval_phi(vv, n):
        acc = _pad(cju[degv][:n], n)
        for j in range(degv - 1, -1, -1):
            acc = ps_mul(acc, vv, p, n)
            acc = _pad(acc, n)
            acc = (acc + cju[j][:n]) % p
        return acc

    def eval_dphi(vv, n):
        acc = _pad(dcju[degv - 1][:n], n)
        for j in range(degv - 2, -1, -1):
            acc = ps_mul(acc, vv, p, n)
            acc = _pad(acc, n)
            acc = (acc + dcju[j][:n]) % p
        return acc

    if np.any(eval_phi(v, n0)):
        raise BadSeedError("Phi(u, v0) != 0 to the seed order")
    d0 = eval_dphi(v, n0)
    nz = np.nonzero(d0 % p)[0]
    if len(nz) == 0:
        raise SingularLiftError("dPhi/dV vanishes to the seed order")
    # dPhi/dV may vanish at the base point (the plane model can be
    # singular where several cusps meet); Newton still converges with
    # the step n -> 2n - r once the seed is past the valuation r
    r = int(nz[0])
    if 2 * r + 8 >= n0:
        raise BadSeedError("seed too short for ramification order %d" % r)
    if L < B + r:
        raise BadSeedError("need %d terms of u, got %d" % (B + r, L))

    n = n0
    while n < B:
        n_next = min(2 * n - r, B)
        m = n_next + r
        vv = _pad(v, m)
        num = eval_phi(vv, m)
        den = eval_dphi(vv, m)
        num = _pad(num, m)
        den = _pad(den, m)
        assert not np.any(num[:r] % p), "lost the branch during lifting"
        corr = ps_mul(num[r:], ps_inv(den[r:], p, n_next), p, n_next)
        v = (_pad(vv, n_next) - _pad(corr, n_next)) % p
        n = n_next
    return v[:B]


# ---------------------------------------------------------------------------
# complex series helpers (short local expansions)

def cs_mul(a, b, n):
    """Schoolbook product of complex coefficient lists, truncated to n."""
    out = [mpc(0)] * min(n, len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if i >= n:
            break
        hi = min(len(b), n - i)
        for j in range(hi):
            out[i + j] += ai * b[j]
    return out


def cs_eval(a, z):
    """Evaluate sum a[n] z^n by Horner."""
    acc = mpc(0)
    for c in reversed(a):
        acc = acc * z + c
    return acc
