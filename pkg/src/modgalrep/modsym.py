"""Manin symbols for Gamma_1(ell), ell prime, and the weight-2 Hecke action.

The presentation is the usual one: free abelian group on symbols
(u, v) in (Z/ell)^2 minus 0, modulo +-1 and the two-term and three-term
relations, which gives relative homology of X_1(ell) with respect to the
cusps.  Hecke operators act through Merel's matrices, diamonds by
scaling the symbol.  Everything here is exact (ints and Fractions).
"""

import math
from fractions import Fraction

import numpy as np

from . import zlinalg


def _least_prime_factor(n):
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def _is_prime_int(n):
    return n >= 2 and _least_prime_factor(n) == n


def merel_matrices(n):
    """All integer matrices [[a,b],[c,d]] with det n, a > b >= 0, d > c >= 0.

    Returns four parallel int64 arrays.  This is the determinant-n family
    through which T_n acts on Manin symbols.
    """
    A, B, C, D = [], [], [], []
    for a in range(1, n + 1):
        for b in range(a):
            if b == 0:
                if n % a:
                    continue
                d = n // a
                for c in range(d):
                    A.append(a)
                    B.append(0)
                    C.append(c)
                    D.append(d)
                continue
            if math.gcd(a, b) != 1:
                continue
            # need a | n + b*c, then d = (n + b*c)/a, and c < d
            # is the same as (a - b)*c < n
            c = (-n * pow(b, -1, a)) % a
            while (a - b) * c < n:
                d = (n + b * c) // a
                A.append(a)
                B.append(b)
                C.append(c)
                D.append(d)
                c += a
    arr = lambda x: np.asarray(x, dtype=np.int64)
    return arr(A), arr(B), arr(C), arr(D)


def _normalize_pair(u, v, ell):
    u %= ell
    v %= ell
    if u == 0:
        if v > ell // 2:
            v = ell - v
    elif u > ell // 2:
        u = ell - u
        v = (-v) % ell
    return u, v


def _lift_pair(u, v, ell):
    """Coprime integer lift (c, d) of a nonzero symbol (u, v) mod ell."""
    c = u % ell or ell
    d = v % ell
    if d == 0 and c != 1:
        d = ell
    while math.gcd(c, d) != 1:
        d += ell
    return c, d


class ModSymSpace:
    """Weight-2 modular symbols for Gamma_1(ell) over ZZ.

    Attributes after construction:
      syms       list of normalized (u, v) pairs
      n_free     rank of the relative homology lattice M
      symred     (n_sym x n_free) int64 matrix: symbol -> coordinates
      cusps      list of cusp classes ('inf'|'zero', label)
      boundary   (n_free x n_cusps) int64 matrix
      cuspidal   (2g x n_free) int64 matrix, saturated kernel of boundary
    """

    def __init__(self, ell):
        if ell < 11 or any(ell % q == 0 for q in range(2, ell)):
            raise ValueError("level must be a prime >= 11")
        self.ell = ell
        self.g = (ell - 5) * (ell - 7) // 24
        self._hecke_cache = {}
        self._cusp_mat_cache = {}
        self._build_symbols()
        self._build_quotient()
        self._build_boundary()

    # -- presentation -------------------------------------------------------

    def _build_symbols(self):
        ell = self.ell
        self.syms = []
        self.symid = -np.ones((ell, ell), dtype=np.int64)
        for u in range(ell):
            for v in range(ell):
                if u == 0 and v == 0:
                    continue
                uu, vv = _normalize_pair(u, v, ell)
                if (uu, vv) == (u, v):
                    self.symid[u, v] = len(self.syms)
                    self.syms.append((u, v))
        for u in range(ell):
            for v in range(ell):
                if u == 0 and v == 0:
                    continue
                uu, vv = _normalize_pair(u, v, ell)
                self.symid[u, v] = self.symid[uu, vv]
        assert len(self.syms) == (ell * ell - 1) // 2

    def sym_index(self, u, v):
        i = int(self.symid[u % self.ell, v % self.ell])
        return i if i >= 0 else None

    def _build_quotient(self):
        ell = self.ell
        n = len(self.syms)
        rels = []
        for i, (u, v) in enumerate(self.syms):
            row = [0] * n
            row[i] += 1
            row[self.sym_index(v, -u)] += 1  # x + x*sigma
            rels.append(row)
            row = [0] * n
            row[i] += 1
            row[self.sym_index(v, -u - v)] += 1  # x + x*tau + x*tau^2
            row[self.sym_index(-u - v, u)] += 1
            rels.append(row)
        rows, pivots = zlinalg.rrefQ(rels)
        pivset = set(pivots)
        self.free = [c for c in range(n) if c not in pivset]
        self.n_free = len(self.free)
        expected = 2 * self.g + (ell - 1) - 1
        assert self.n_free == expected, (self.n_free, expected)
        freepos = {c: j for j, c in enumerate(self.free)}
        symred = np.zeros((n, self.n_free), dtype=np.int64)
        for j, c in enumerate(self.free):
            symred[c, j] = 1
        for row, piv in zip(rows, pivots):
            for c in range(n):
                if c in freepos and row[c] != 0:
                    val = -row[c]
                    assert val.denominator == 1, "relation lattice not unimodular"
                    symred[piv, freepos[c]] = int(val)
        self.symred = symred

    # -- boundary and cusps -------------------------------------------------

    def cusp_class(self, a, c):
        """Gamma_1(ell)-class of the cusp a/c (coprime integers)."""
        ell = self.ell
        if c % ell == 0:
            r = a % ell
            return ('inf', min(r, ell - r))
        r = c % ell
        return ('zero', min(r, ell - r))

    def _build_boundary(self):
        ell = self.ell
        cusp_index = {}
        cusps = []
        bsym = []
        for (u, v) in self.syms:
            c, d = _lift_pair(u, v, ell)
            # a*d - b*c = 1
            gg, x, y = _xgcd(d, c)
            assert gg == 1
            a, b = x, -y
            row = {}
            for cls, sgn in ((self.cusp_class(a, c), 1),
                             (self.cusp_class(b, d), -1)):
                if cls not in cusp_index:
                    cusp_index[cls] = len(cusps)
                    cusps.append(cls)
                row[cusp_index[cls]] = row.get(cusp_index[cls], 0) + sgn
            bsym.append(row)
        self.cusps = cusps
        self.cusp_index = cusp_index
        assert len(cusps) == ell - 1
        bmat_sym = np.zeros((len(self.syms), len(cusps)), dtype=np.int64)
        for i, row in enumerate(bsym):
            for j, val in row.items():
                bmat_sym[i, j] = val
        # boundary must kill the relations: check via the reduction table
        # (each symbol's boundary equals the boundary of its reduction)
        bfree = bmat_sym[self.free, :]
        assert np.array_equal(self.symred @ bfree, bmat_sym), \
            "boundary map does not factor through the relations"
        self.boundary = bfree
        ker = zlinalg.kernel_z([list(r) for r in bfree])
        assert len(ker) == 2 * self.g, (len(ker), 2 * self.g)
        self.cuspidal = np.asarray(ker, dtype=np.int64)

    def boundary_of(self, vec):
        return np.asarray(vec, dtype=np.int64) @ self.boundary

    # -- Hecke and diamond action -------------------------------------------

    def hecke_apply(self, n, vec):
        """T_n applied to a vector in free-generator coordinates."""
        if n == 1:
            return np.asarray(vec, dtype=np.int64).copy()
        if not _is_prime_int(n):
            return np.asarray(vec, dtype=np.int64) @ \
                np.asarray(self.hecke_matrix(n)).T
        ell = self.ell
        A, B, C, D = merel_matrices(n)
        out = np.zeros(self.n_free, dtype=np.int64)
        vec = np.asarray(vec, dtype=np.int64)
        for j in np.nonzero(vec)[0]:
            u, v = self.syms[self.free[j]]
            uu = (A * u + C * v) % ell
            vv = (B * u + D * v) % ell
            idx = self.symid[uu, vv]
            idx = idx[idx >= 0]
            counts = np.bincount(idx, minlength=len(self.syms))
            out += int(vec[j]) * (counts @ self.symred)
        return out

    def hecke_matrix(self, n):
        """Matrix of T_n on M; column j is the image of generator j.

        Merel's matrices give T_p for prime p; composite n is assembled
        from the multiplicative relations (weight 2):
        T_{mn} = T_m T_n for coprime m, n and
        T_{p^r} = T_p T_{p^{r-1}} - p <p> T_{p^{r-2}} for p != ell,
        T_{ell^r} = T_ell^r.
        """
        if n in self._hecke_cache:
            return self._hecke_cache[n]
        if n == 1:
            mat = np.eye(self.n_free, dtype=np.int64)
        elif _is_prime_int(n):
            cols = []
            e = np.zeros(self.n_free, dtype=np.int64)
            for j in range(self.n_free):
                e[:] = 0
                e[j] = 1
                cols.append(self.hecke_apply(n, e))
            mat = np.stack(cols, axis=1)
        else:
            p = _least_prime_factor(n)
            r = 0
            m = n
            while m % p == 0:
                m //= p
                r += 1
            if m > 1:
                mat = np.asarray(self.hecke_matrix(p ** r)) @ \
                    np.asarray(self.hecke_matrix(m))
            else:
                Tp = np.asarray(self.hecke_matrix(p))
                prev2 = np.asarray(self.hecke_matrix(p ** (r - 2))) \
                    if r >= 2 else None
                prev1 = np.asarray(self.hecke_matrix(p ** (r - 1)))
                if p == self.ell:
                    mat = Tp @ prev1
                else:
                    Dp = np.asarray(self.diamond_matrix(p % self.ell))
                    mat = Tp @ prev1 - p * (Dp @ prev2)
        self._hecke_cache[n] = mat
        return mat

    def diamond_apply(self, d, vec):
        ell = self.ell
        out = np.zeros(self.n_free, dtype=np.int64)
        vec = np.asarray(vec, dtype=np.int64)
        for j in np.nonzero(vec)[0]:
            u, v = self.syms[self.free[j]]
            i = self.sym_index(d * u, d * v)
            out += int(vec[j]) * self.symred[i]
        return out

    def diamond_matrix(self, d):
        cols = []
        e = np.zeros(self.n_free, dtype=np.int64)
        for j in range(self.n_free):
            e[:] = 0
            e[j] = 1
            cols.append(self.diamond_apply(d, e))
        return np.stack(cols, axis=1)

    def to_cuspidal_coords(self, vec):
        """Coordinates of a cuspidal vector in the cuspidal lattice basis."""
        Gt = [[int(self.cuspidal[k, i]) for k in range(2 * self.g)]
              for i in range(self.n_free)]
        x = zlinalg.solveQ(Gt, [int(t) for t in vec])
        assert x is not None, "vector is not cuspidal"
        return x

    def cuspidal_matrix(self, mat):
        """Restrict an integer matrix on M to the cuspidal lattice basis."""
        key = mat.tobytes()
        if key in self._cusp_mat_cache:
            return self._cusp_mat_cache[key]
        cols = []
        for k in range(2 * self.g):
            img = mat @ self.cuspidal[k]
            cols.append(self.to_cuspidal_coords(img))
        out = [[cols[k][j] for k in range(2 * self.g)] for j in range(2 * self.g)]
        self._cusp_mat_cache[key] = out
        return out

    def hecke_cuspidal(self, n):
        return self.cuspidal_matrix(self.hecke_matrix(n))

    def diamond_cuspidal(self, d):
        return self.cuspidal_matrix(self.diamond_matrix(d))

    # -- paths and winding elements -----------------------------------------

    def infty_to(self, a, b):
        """The symbol {oo, a/b} in free-generator coordinates (b >= 0)."""
        if b == 0:
            return np.zeros(self.n_free, dtype=np.int64)
        if b < 0:
            a, b = -a, -b
        out = np.zeros(self.n_free, dtype=np.int64)
        # convergents of the continued fraction of a/b
        quots = []
        x, y = a, b
        while y:
            quots.append(x // y)
            x, y = y, x - (x // y) * y
        p_prev, q_prev = 1, 0
        p_cur, q_cur = quots[0], 1
        i = self.sym_index(q_cur, q_prev)
        if i is not None:
            out += self.symred[i]
        # the k-th segment is the symbol (q_k, (-1)^(k-1) q_{k-1})
        sgn = 1
        for qt in quots[1:]:
            p_prev, p_cur = p_cur, qt * p_cur + p_prev
            q_prev, q_cur = q_cur, qt * q_cur + q_prev
            i = self.sym_index(q_cur, sgn * q_prev)
            if i is not None:
                out += self.symred[i]
            sgn = -sgn
        assert Fraction(p_cur, q_cur) == Fraction(a, b)
        return out

    def winding_element(self, p):
        """Twisted winding element sum_a (a|p) {oo, a/p}; p=1 gives {oo, 0}."""
        if p == 1:
            return self.infty_to(0, 1)
        out = np.zeros(self.n_free, dtype=np.int64)
        for a in range(1, p):
            chi = pow(a, (p - 1) // 2, p)
            chi = 1 if chi == 1 else -1
            out += chi * self.infty_to(a, p)
        return out


# ---------------------------------------------------------------------------
# Hecke eigendata on the cuspidal part
#
# For a well-chosen prime p0 the operator T = T_{p0} has g distinct
# eigenvalues on the cuspidal part (each of multiplicity two, one per
# holomorphic/antiholomorphic pair), so every T_n and every diamond acts
# as a polynomial q_n(T) with q_n in QQ[X] of degree < g.  All eigenform
# coefficient systems are then read off from the q_n.


def _primes_upto(B):
    sieve = bytearray([1]) * (B + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(B ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i:: i] = b"\x00" * len(sieve[i * i:: i])
    return [i for i in range(B + 1) if sieve[i]]


def _poly_mod(a, s):
    _, r = zlinalg.poly_divmodQ(a, s)
    r = list(r) + [Fraction(0)] * (len(s) - 1 - len(r))
    return r[: len(s) - 1]


def _poly_mulmod(a, b, s):
    return _poly_mod(zlinalg.poly_mulQ(a, b), s)


class HeckeEigendata:
    """Cuspidal Hecke eigenvalue systems for one level, exactly over QQ."""

    GEN_CANDIDATES = (2, 3, 5, 7, 11, 13, 19, 23)

    def __init__(self, space):
        self.space = space
        g = space.g
        for p in self.GEN_CANDIDATES:
            if p == space.ell:
                continue
            T = space.hecke_cuspidal(p)
            cp = zlinalg.charpolyQ(T)
            s = zlinalg.squarefree_partQ(cp)
            if len(s) - 1 == g and zlinalg.poly_mulQ(s, s) == cp:
                self.gen_prime = p
                self.s = s
                self.T = T
                break
        else:
            raise RuntimeError("no single-prime Hecke generator up to 23")
        assert all(c.denominator == 1 for c in self.s)
        rng = np.random.default_rng(11235)
        for _ in range(32):
            w = [int(x) for x in rng.integers(-4, 5, size=2 * g)]
            cols = []
            vec = [Fraction(x) for x in w]
            for _k in range(g):
                cols.append(vec)
                vec = [sum(Fraction(self.T[i][j]) * vec[j]
                           for j in range(2 * g)) for i in range(2 * g)]
            M = [[cols[k][i] for k in range(g)] for i in range(2 * g)]
            _, piv = zlinalg.rrefQ([row[:] for row in M])
            if len(piv) == g:
                self.w = w
                self.solve_mat = M
                break
        else:
            raise RuntimeError("no cyclic vector found")
        self.wfull = space.cuspidal.T @ np.asarray(self.w, dtype=np.int64)
        self._ap = {}
        self._eps = {}

    def _op_poly(self, imgfull):
        y = self.space.to_cuspidal_coords(imgfull)
        c = zlinalg.solveQ(self.solve_mat, y)
        assert c is not None, "operator is not a polynomial in the generator"
        return c + [Fraction(0)] * (self.space.g - len(c))

    def ap_poly(self, p):
        """a_p (or a_ell = U_ell eigenvalue) as a poly in T mod s."""
        if p not in self._ap:
            self._ap[p] = self._op_poly(self.space.hecke_apply(p, self.wfull))
        return self._ap[p]

    def eps_poly(self, d):
        """Nebentypus value eps(d) as a poly in T mod s."""
        d %= self.space.ell
        if d not in self._eps:
            self._eps[d] = self._op_poly(self.space.diamond_apply(d, self.wfull))
        return self._eps[d]

    def an_polys(self, B, progress=None):
        """a_n mod s for 1 <= n <= B; returns list indexed by n (0 unused)."""
        g = self.space.g
        ell = self.space.ell
        s = self.s
        one = [Fraction(1)] + [Fraction(0)] * (g - 1)
        out = [None] * (B + 1)
        if B >= 1:
            out[1] = one
        spf = list(range(B + 1))
        for i in range(2, int(B ** 0.5) + 1):
            if spf[i] == i:
                for j in range(i * i, B + 1, i):
                    if spf[j] == j:
                        spf[j] = i
        for p in _primes_upto(B):
            qp = self.ap_poly(p)
            eps_p = None if p == ell else self.eps_poly(p)
            prev, cur = one, qp
            pk = p
            out[pk] = cur
            while pk * p <= B:
                if p == ell:
                    nxt = _poly_mulmod(qp, cur, s)
                else:
                    corr = [p * x for x in _poly_mulmod(eps_p, prev, s)]
                    nxt = [a - b for a, b in
                           zip(_poly_mulmod(qp, cur, s), corr)]
                prev, cur = cur, nxt
                pk *= p
                out[pk] = cur
            if progress:
                progress(p)
        for n in range(2, B + 1):
            if out[n] is not None:
                continue
            p = spf[n]
            pk = p
            while n % (pk * p) == 0:
                pk *= p
            out[n] = _poly_mulmod(out[pk], out[n // pk], s)
        return out

    @staticmethod
    def eval_at_root(poly, lam):
        """Horner evaluation of a Fraction poly at a complex value.

        Works for numpy complex and gmpy2 types alike; both know how to
        combine with Fraction operands.
        """
        acc = lam * 0
        for c in reversed(poly):
            acc = acc * lam + c
        return acc


def orbit_factors(eig):
    """Factor s into its QQ-irreducible pieces, tagged by nebentypus order.

    Roots are computed in float precision and regrouped; every candidate
    factor is verified by exact division of s, so float error can only
    cause a failure, never a wrong factorization.
    """
    space = eig.space
    ell = space.ell
    s = [float(c) for c in eig.s]
    roots = np.roots(list(reversed(s)))
    # Newton polish
    ds = [i * s[i] for i in range(1, len(s))]
    for _ in range(30):
        vals = np.polyval(list(reversed(s)), roots)
        dvals = np.polyval(list(reversed(ds)), roots)
        roots = roots - vals / dvals
    g0 = _primitive_root(ell)
    epoly = [float(c) for c in eig.eps_poly(g0)]
    m = (ell - 1) // 2
    orders = []
    for lam in roots:
        val = np.polyval(list(reversed(epoly)), lam)
        best = min(range(m), key=lambda j: abs(val - np.exp(2j * np.pi * j / m)))
        o = m // math.gcd(best, m)
        orders.append(o)
    groups = {}
    for lam, o in zip(roots, orders):
        groups.setdefault(o, []).append(lam)
    factors = []
    rem = [Fraction(c) for c in eig.s]
    for o, lams in sorted(groups.items()):
        remaining = list(lams)
        while remaining:
            for subset in _subset_candidates(remaining):
                cand = list(reversed(np.poly(subset)))  # constant first
                coeffs = [Fraction(int(round(c.real))) for c in cand]
                if max(abs(complex(a) - b) for a, b in zip(coeffs, cand)) > 1e-4:
                    continue
                q, r = zlinalg.poly_divmodQ(rem, coeffs)
                if any(r):
                    continue
                factors.append({"poly": coeffs, "eps_order": o,
                                "roots": list(subset)})
                rem = q
                used = set(id(x) for x in subset)
                remaining = [x for x in remaining if id(x) not in used]
                break
            else:
                raise RuntimeError("could not match an exact factor of s")
    assert len(rem) == 1 and rem[0] == 1
    return factors


def _subset_candidates(lams):
    """The full set first, then smaller subsets (orbit may split further)."""
    yield list(lams)
    n = len(lams)
    for size in range(1, n):
        import itertools
        for comb in itertools.combinations(range(n), size):
            yield [lams[i] for i in comb]


def _primitive_root(ell):
    for a in range(2, ell):
        seen = set()
        x = 1
        for _ in range(ell - 1):
            x = x * a % ell
            seen.add(x)
        if len(seen) == ell - 1:
            return a
    raise ValueError


# ---------------------------------------------------------------------------
# the mod-ell eigenplane of the target form inside H_1(X_1(ell), Z/ell)


def eigen_system_mod_l(space, form, pmax=50):
    """Cut out the 2-dimensional mod-ell eigenspace of the target form.

    Returns (plane, mu, eps_tilde): plane is a pair of vectors in the
    cuspidal lattice basis mod ell, mu maps small primes p to a_p mod
    ell, and eps_tilde maps d to the mod-ell diamond eigenvalue d^(k-2).
    """
    from . import targets
    from .numeric import ConfigExcludedError

    ell = space.ell
    if form in targets.EXCEPTIONAL and ell in targets.EXCEPTIONAL[form]:
        raise ConfigExcludedError(
            "mod-%d representation of %s is degenerate" % (ell, form))
    k = targets.WEIGHTS[form]
    an = targets.newform_coeffs(form, pmax + 1)
    mu = {p: an[p] % ell for p in _primes_upto(pmax) if p != ell}
    g0 = _primitive_root(ell)
    eps_tilde = {d: pow(d, k - 2, ell) for d in range(1, ell)}

    n = 2 * space.g
    stack = []
    for p, val in mu.items():
        Tp = space.hecke_cuspidal(p)
        for i in range(n):
            stack.append([(int(Tp[i][j]) - (val if i == j else 0)) % ell
                          for j in range(n)])
    Dg = space.diamond_cuspidal(g0)
    for i in range(n):
        stack.append([(int(Dg[i][j]) - (eps_tilde[g0] if i == j else 0)) % ell
                      for j in range(n)])
    plane = zlinalg.kernel_modp(stack, ell)
    if len(plane) != 2:
        raise ConfigExcludedError(
            "eigenspace mod %d has dimension %d, expected 2"
            % (ell, len(plane)))
    return plane, mu, eps_tilde


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
