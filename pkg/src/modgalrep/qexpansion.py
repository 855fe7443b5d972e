"""Fast q-expansions of the weight-2 eigenforms mod a word-size prime.

The idea: attach to each Galois orbit of eigenforms a modular function
that lives on X_0(ell), namely v = q*f0/w for the trivial-nebentypus
form f0 (w = q^2 dj/dq) and v = (f/f0)^o for a form f whose nebentypus
has order o.  Such a v satisfies a polynomial relation Phi(u, v) = 0
over u = 1/j with deg_V Phi = ell + 1 and small deg_U.  The relation is
fitted mod p from a short exact expansion (modular symbols), validated
on twice as many terms, and then Newton-lifted with NTT multiplication,
which makes the cost quasi-linear in the target length B.
"""

import math
from fractions import Fraction

import numpy as np

from .modsym import HeckeEigendata, orbit_factors, _primes_upto
from .numeric import ConfigExcludedError, PrecisionError
from .series import (BadSeedError, ps_inv, ps_mul, ps_nth_root,
                     series_newton_root)


def genus_x0(p):
    """Genus of X_0(p), p prime."""
    def leg(a):
        a %= p
        if a == 0:
            return 0
        return 1 if pow(a, (p - 1) // 2, p) == 1 else -1
    nu2 = 1 + leg(-1)
    nu3 = 1 + leg(-3)
    val = Fraction(p + 1, 12) - Fraction(nu2, 4) - Fraction(nu3, 3)
    assert val.denominator == 1 or True
    g = 1 + Fraction(p + 1, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - 1
    assert g.denominator == 1
    return int(g)


def _sigma_modp(B, k, p):
    s = np.zeros(B, dtype=np.int64)
    for d in range(1, B):
        s[d::d] += pow(d, k, p)
        if d % 256 == 0:
            s %= p
    return s % p


def base_series_modp(B, p):
    """(u, w) mod p to B terms: u = 1/j and w = q^2 dj/dq (a unit)."""
    inv1728 = pow(1728, p - 2, p)
    e4 = (240 * _sigma_modp(B, 3, p)) % p
    e4[0] = 1
    e6 = (-504 * _sigma_modp(B, 5, p)) % p
    e6[0] = 1
    e4c = ps_mul(ps_mul(e4, e4, p, B), e4, p, B)
    delta = (e4c - ps_mul(e6, e6, p, B)) * inv1728 % p
    assert delta[0] == 0 and delta[1] == 1 % p
    u = ps_mul(delta, ps_inv(e4c, p, B), p, B)
    # J = q*j = E4^3 / (delta/q)
    dsh = np.roll(delta, -1)
    dsh[-1] = 0
    J = ps_mul(e4c, ps_inv(dsh, p, B), p, B)
    n = np.arange(B, dtype=np.int64)
    w = (n - 1) % p * J % p
    return u, w


def _kernel_modp_np(mat, p):
    """One kernel vector of an int64 matrix mod p, plus the kernel dim."""
    a = np.array(mat, dtype=np.int64) % p
    nrows, ncols = a.shape
    piv_cols = []
    r = 0
    for c in range(ncols):
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        a[[r, i]] = a[[i, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in set(piv_cols)]
    if not free:
        return None, 0
    c0 = free[0]
    v = np.zeros(ncols, dtype=np.int64)
    v[c0] = 1
    for row, pc in zip(range(len(piv_cols)), piv_cols):
        v[pc] = (-a[row, c0]) % p
    return v, len(free)


def fit_relation(u, v, deg_u, deg_v, p):
    """Fit Phi with deg_U <= deg_u, deg_V = deg_v to the given series.

    Returns phi as an int array phi[j][i] (coefficient of U^i V^j) with a
    one-dimensional solution space; deg_u is lowered automatically when
    the space is bigger (relation times a polynomial in u).
    """
    N = min(len(u), len(v))
    upow = [np.array([1] + [0] * (N - 1), dtype=np.int64)]
    for _ in range(deg_u):
        upow.append(ps_mul(upow[-1], u, p, N))
    vpow = [np.array([1] + [0] * (N - 1), dtype=np.int64)]
    for _ in range(deg_v):
        vpow.append(ps_mul(vpow[-1], v, p, N))
    while deg_u >= 0:
        cols = []
        for j in range(deg_v + 1):
            for i in range(deg_u + 1):
                pad = np.zeros(N, dtype=np.int64)
                prod = ps_mul(upow[i], vpow[j], p, N)
                pad[:len(prod)] = prod
                cols.append(pad)
        mat = np.stack(cols, axis=1)
        vec, dim = _kernel_modp_np(mat, p)
        if dim == 1:
            phi = np.zeros((deg_v + 1, deg_u + 1), dtype=object)
            t = 0
            for j in range(deg_v + 1):
                for i in range(deg_u + 1):
                    phi[j][i] = int(vec[t])
                    t += 1
            return phi
        if dim == 0:
            raise PrecisionError("no relation found; deg_u bound too small?")
        deg_u -= 1
    raise PrecisionError("relation fitting failed")


# ---------------------------------------------------------------------------
# per-orbit expansion


def _poly_modp(fracs, p):
    out = []
    for c in fracs:
        c = Fraction(c)
        out.append(c.numerator * pow(c.denominator, p - 2, p) % p)
    return out


def _pm_mulmod(a, b, f, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # reduce mod monic f
    n = len(f) - 1
    for i in range(len(out) - 1, n - 1, -1):
        c = out[i]
        if c:
            for k in range(n + 1):
                out[i - n + k] = (out[i - n + k] - c * f[k]) % p
    return [x % p for x in out[:n]] + [0] * max(0, n - len(out))


def _pm_powmod(base, e, f, p):
    out = [1] + [0] * (len(f) - 2)
    b = list(base)
    while e:
        if e & 1:
            out = _pm_mulmod(out, b, f, p)
        b = _pm_mulmod(b, b, f, p)
        e >>= 1
    return out


def roots_modp(poly, p, rng=None):
    """All roots in F_p of a squarefree, totally split monic int poly."""
    if rng is None:
        rng = np.random.default_rng(7)
    f = [c % p for c in poly]
    inv = pow(f[-1], p - 2, p)
    f = [c * inv % p for c in f]
    deg = len(f) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-f[0]) % p]
    # check split: x^p == x mod f
    xp = _pm_powmod([0, 1], p, f, p)
    if xp != [0, 1] + [0] * (deg - 2):
        raise ValueError("polynomial does not split mod p")
    # random splitting
    while True:
        a = int(rng.integers(0, p))
        h = _pm_powmod([a, 1], (p - 1) // 2, f, p)
        h[0] = (h[0] - 1) % p
        g = _polygcd_modp(f, h, p)
        if 0 < len(g) - 1 < deg:
            q = _polydiv_modp(f, g, p)
            return roots_modp(g, p, rng) + roots_modp(q, p, rng)


def _polygcd_modp(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    while any(b):
        a, b = b, _polyrem_modp(a, b, p)
    while a and a[-1] == 0:
        a.pop()
    inv = pow(a[-1], p - 2, p)
    return [x * inv % p for x in a]


def _polyrem_modp(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    while b and b[-1] == 0:
        b.pop()
    binv = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] * binv % p
        off = len(a) - len(b)
        for i in range(len(b)):
            a[off + i] = (a[off + i] - f * b[i]) % p
        a.pop()
    return a


def _polydiv_modp(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]
    binv = pow(b[-1], p - 2, p)
    q = [0] * (len(a) - len(b) + 1)
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] * binv % p
        off = len(a) - len(b)
        q[off] = f
        for i in range(len(b)):
            a[off + i] = (a[off + i] - f * b[i]) % p
        a.pop()
    return q


def max_divisor_count(B):
    d = np.zeros(B + 1, dtype=np.int64)
    for i in range(1, B + 1):
        d[i::i] += 1
    return int(d.max())


def choose_prime(eig, orbit, B, den_bound=1, margin=16):
    """A prime p = 1 mod (ell-1)/2 large enough for balanced lifting."""
    ell = eig.space.ell
    m = (ell - 1) // 2
    lams = orbit["roots"]
    deg = len(lams)
    if deg > 1:
        V = np.array([[lam ** k for k in range(deg)] for lam in lams])
        distortion = np.abs(np.linalg.inv(V)).sum(axis=1).max()
    else:
        distortion = 1.0
    bound = max_divisor_count(B) * math.sqrt(B) * distortion * den_bound
    target = int(2 * bound * margin) + 1
    p = target + ((1 - target) % m)
    while True:
        if p >= 2 ** 31:
            raise PrecisionError("single-word prime insufficient for B=%d" % B)
        if all(p % q for q in _primes_upto(int(p ** 0.5))):
            return p
        p += m


class OrbitExpansion:
    """a_n mod p for each prime of the orbit's coefficient field over p."""

    def __init__(self, orbit, p, roots, series):
        self.orbit = orbit
        self.p = p
        self.roots = roots      # roots of the orbit poly mod p
        self.series = series    # list of int64 arrays, parallel to roots


def _seed_series_modp(an_polys_list, root, p, B):
    out = np.zeros(B, dtype=np.int64)
    deg = None
    for n in range(1, min(B - 1, len(an_polys_list) - 1) + 1):
        poly = an_polys_list[n]
        if poly is None:
            continue
        acc = 0
        pw = 1
        for c in poly:
            c = Fraction(c)
            acc = (acc + c.numerator * pow(c.denominator, p - 2, p) * pw) % p
            pw = pw * root % p
        out[n] = acc
    return out


def expand_level(eig, B, p=None, seed_factor=2):
    """Expand every Galois orbit of eigenforms at this level to B terms.

    Returns (p, [OrbitExpansion ...]).  The trivial-nebentypus orbit must
    exist (prime levels 17, 19, ...); levels without one are refused.
    """
    space = eig.space
    ell = space.ell
    m = (ell - 1) // 2
    facs = orbit_factors(eig)
    trivial = [f for f in facs if f["eps_order"] == 1]
    if not trivial:
        raise ConfigExcludedError(
            "level %d has no trivial-nebentypus eigenform; "
            "use the exact expansion instead" % ell)
    deg_v = ell + 1
    degu_triv = 2 * genus_x0(ell) + ell + 1
    seed_len = {}
    for f in facs:
        o = f["eps_order"]
        if o == 1:
            du = degu_triv
        else:
            du = -((-o * (2 * space.g - 2)) // m)
        f["deg_u"] = du
        seed_len[id(f)] = seed_factor * (du + 1) * (ell + 2)
    n0 = max(seed_len.values())
    if p is None:
        den = 1
        # probe denominators from a short exact run
        short = eig.an_polys(50)
        for poly in short[1:]:
            for c in poly:
                den = den * Fraction(c).denominator // math.gcd(
                    den, Fraction(c).denominator)
        p = choose_prime(eig, max(facs, key=lambda f: len(f["poly"])), B,
                         den_bound=den)
    an = eig.an_polys(max(n0, 256))
    u, w = base_series_modp(max(B, n0) + 32, p)

    results = []
    f0_seed = None
    f0_full = None
    # trivial orbit first: its lift feeds the nontrivial ones
    for f in sorted(facs, key=lambda fc: fc["eps_order"]):
        o = f["eps_order"]
        rts = roots_modp([int(c) for c in f["poly"]], p)
        series = []
        for rt in rts:
            seed = _seed_series_modp(an, rt, p, n0)
            if o == 1:
                # v = q*f/w, a function on X_0(ell) starting at q^2
                qf = np.concatenate([[0], seed[:-1]])
                v0 = ps_mul(qf, ps_inv(w[:n0], p, n0), p, n0)
                phi = fit_relation(u[:n0], v0, f["deg_u"], deg_v, p)
                full = series_newton_root(phi, u, v0, B + 1, p)
                fw = ps_mul(full, w[: B + 1], p, B + 1)
                assert fw[0] % p == 0
                fn = fw[1:]  # divide by q
                series.append(fn % p)
                f0_seed, f0_full = seed, fn % p
            else:
                # v = (f/f0)^o, also a function on X_0(ell), v(0) = 1
                ratio = ps_mul(seed[1:], ps_inv(f0_seed[1:], p, n0 - 1),
                               p, n0 - 1)
                v0 = ratio
                for _ in range(o - 1):
                    v0 = ps_mul(v0, ratio, p, n0 - 1)
                phi = fit_relation(u[:n0 - 1], v0, f["deg_u"], deg_v, p)
                full = series_newton_root(phi, u, v0, B, p)
                r = ps_nth_root(full, o, p, B)
                fn = ps_mul(r, f0_full[:B], p, B)
                series.append(fn % p)
        results.append(OrbitExpansion(f, p, rts, series))
    # validate against the exact seed beyond the fitted range
    for res in results:
        for rt, arr in zip(res.roots, res.series):
            seed = _seed_series_modp(an, rt, p, min(len(an) - 1, len(arr)))
            if np.any((arr[: len(seed)] - seed) % p):
                raise PrecisionError("expansion disagrees with exact seed")
    return p, results
