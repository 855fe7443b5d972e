"""Period lattice of X_1(ell) via twisted winding elements.

Integrals of the eigenforms over the integral cuspidal basis gamma_j are
computed in two steps: gamma_j is written exactly (over QQ) as a
combination of diamond and Hecke translates of winding elements w_p, and
the integral over w_p is summed as a rapidly convergent q-series at
x = exp(-2 pi / (p sqrt(ell))).

The winding element here is w_p = sum_a (a|p) {oo, a/p} (paths from oo),
and with omega = 2 pi i f dtau,

   int_{w_p} omega = g(chi_p) sum_n (a_n - eps(p)(-ell|p) lam abar_n)
                                 (n|p) x^n / n,

where lam is the measured Fricke multiplier of f.  The derivation has
enough sign conventions in it that the result is cross-checked by Hecke
equivariance: decomposing T_q gamma_j independently and comparing the
two integral routes catches any p-dependent sign slip.
"""

from fractions import Fraction

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from . import zlinalg
from .modsym import HeckeEigendata
from .numeric import PrecisionError, workprec


def _legendre(a, p):
    if p == 1:
        return 1
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def _gauss_quadratic(p):
    """Gauss sum of the quadratic character mod p (p odd prime, or 1)."""
    if p == 1:
        return mpc(1)
    r = gmpy2.sqrt(mpfr(p))
    return mpc(r) if p % 4 == 1 else mpc(0, r)


class PeriodLattice:
    """Periods of the integral cuspidal basis against all eigenforms.

    matrix[j][s] = int_{gamma_j} omega_s for j < 2g, s < g, where
    gamma_j is row j of space.cuspidal and omega_s = 2 pi i f_s dtau for
    the s-th embedded eigenform of the level catalog.
    """

    WINDING_CANDIDATES = (1, 3, 5, 7, 11, 13, 19, 23, 29, 31)

    def __init__(self, eig, level, prec, pad=48):
        self.eig = eig
        self.space = eig.space
        self.level = level
        self.ell = eig.space.ell
        self.prec = prec
        self.pad = pad
        with workprec(prec + pad + 64):
            self._decompose()
            self._integrate()
            self._assemble()

    # -- exact decomposition over the winding translates ---------------------

    def _candidates_for(self, p):
        space = self.space
        g = space.g
        w = space.winding_element(p)
        out = []
        for d in range(1, (self.ell - 1) // 2 + 1):
            v = space.diamond_apply(d, w)
            for k in range(2 * g):
                out.append(((p, k, d), v))
                if k < 2 * g - 1:
                    v = space.hecke_apply(self.eig.gen_prime, v)
        return out

    def _decompose(self):
        space = self.space
        g = space.g
        gammas = [list(map(int, space.cuspidal[j])) for j in range(2 * g)]
        tags, cols = [], []
        self.winding_primes = []
        for p in self.WINDING_CANDIDATES:
            if p == self.ell or p == 2:
                continue
            self.winding_primes.append(p)
            for tag, v in self._candidates_for(p):
                tags.append(tag)
                cols.append([int(t) for t in v])
            # solvable for every gamma_j yet?
            mat = [[cols[i][r] for i in range(len(cols))]
                   for r in range(space.n_free)]
            sols = [zlinalg.solveQ(mat, gam) for gam in gammas]
            if all(s is not None for s in sols):
                self.decomp_tags = tags
                self.decomp = sols
                return
        raise PrecisionError("winding translates never spanned the "
                             "cuspidal subspace")

    # -- the winding integrals ------------------------------------------------

    def _nterms(self, p):
        # x^B / (1 - x) < 2^-(prec + pad)
        log2x = float(-2 * gmpy2.const_pi() /
                      (p * gmpy2.sqrt(mpfr(self.ell))) / gmpy2.log(mpfr(2)))
        B = int((self.prec + self.pad + 8) / (-log2x)) + 8
        return B

    def _integrate(self):
        eig = self.eig
        embs = self.level.embeddings
        Bmax = max(self._nterms(p) for p in self.winding_primes)
        an_exact = eig.an_polys(Bmax)
        self.nterms_used = Bmax
        # complex coefficient arrays per embedding, to Bmax terms
        ans = []
        for emb in embs:
            lam = emb["root"]
            an = [mpc(0)] * Bmax
            known = emb["an"]
            for n in range(1, Bmax):
                if n < len(known):
                    an[n] = known[n]
                else:
                    an[n] = HeckeEigendata.eval_at_root(an_exact[n], lam)
            ans.append(an)
        self._an_big = ans

        self.wint = {}
        for p in self.winding_primes:
            B = self._nterms(p)
            gp = _gauss_quadratic(p)
            x = gmpy2.exp(-2 * gmpy2.const_pi() /
                          (p * gmpy2.sqrt(mpfr(self.ell))))
            leg = [0] + [_legendre(n, p) for n in range(1, B)]
            vals = []
            for emb, an in zip(embs, ans):
                lam_w = emb["lam"]
                epsp = (mpc(1) if p == 1 else
                        HeckeEigendata.eval_at_root(eig.eps_poly(p % self.ell),
                                                    emb["root"]))
                twist = epsp * _legendre(-self.ell, p) * lam_w
                acc = mpc(0)
                xn = mpfr(1)
                for n in range(1, B):
                    xn = xn * x
                    if leg[n]:
                        c = an[n] - twist * an[n].conjugate()
                        acc += leg[n] * c * xn / n
                vals.append(gp * acc)
            self.wint[p] = vals

    def _phi(self, tag, s):
        """Integral of the tagged translate against embedding s."""
        p, k, d = tag
        emb = self.level.embeddings[s]
        lam = emb["root"]
        epsd = HeckeEigendata.eval_at_root(self.eig.eps_poly(d), lam)
        return epsd * lam ** k * self.wint[p][s]

    def _assemble(self):
        g = self.space.g
        nemb = len(self.level.embeddings)
        self.matrix = []
        for j in range(2 * g):
            row = []
            for s in range(nemb):
                acc = mpc(0)
                for c, tag in zip(self.decomp[j], self.decomp_tags):
                    if c:
                        acc += mpc(mpfr(c.numerator)) / mpfr(c.denominator) \
                            * self._phi(tag, s)
                row.append(acc)
            self.matrix.append(row)

    # -- consistency checks ----------------------------------------------------

    def equivariance_residual(self, q):
        """Max over j, s of |int_{T_q gamma_j} - a_q(s) int_{gamma_j}|.

        T_q gamma_j is decomposed independently over the winding
        translates, so this genuinely tests the integral formula (in
        particular all p-dependent signs), not just linear algebra.
        """
        space = self.space
        g = space.g
        # rebuild the candidate matrix from the stored tags
        vecs = {}
        for p in self.winding_primes:
            for tag, v in self._candidates_for(p):
                vecs[tag] = v
        mat = [[int(vecs[tag][r]) for tag in self.decomp_tags]
               for r in range(space.n_free)]
        worst = mpfr(0)
        scale = max(max(abs(x) for x in row) for row in self.matrix)
        for j in range(2 * g):
            img = space.hecke_apply(q, space.cuspidal[j])
            sol = zlinalg.solveQ(mat, [int(t) for t in img])
            if sol is None:
                raise PrecisionError("translate outside the winding span")
            for s, emb in enumerate(self.level.embeddings):
                lhs = mpc(0)
                for c, tag in zip(sol, self.decomp_tags):
                    if c:
                        lhs += mpc(mpfr(c.numerator)) / mpfr(c.denominator) \
                            * self._phi(tag, s)
                aq = HeckeEigendata.eval_at_root(
                    self.eig.ap_poly(q) if _is_prime(q) else
                    self.eig.an_polys(q + 1)[q], emb["root"])
                rhs = aq * self.matrix[j][s]
                worst = max(worst, abs(lhs - rhs) / scale)
        return worst

    def torsion_point(self, form):
        """Targets in C^g for a basis of the mod-ell eigenplane.

        Returns (vectors, plane, mu, eps_tilde); each vector is the
        image of (1/ell) * lift(plane row) under the period pairing,
        an ell-torsion point of the jacobian.
        """
        from .modsym import eigen_system_mod_l
        plane, mu, epst = eigen_system_mod_l(self.space, form)
        g = self.space.g
        out = []
        for row in plane:
            lift = [int(x) for x in row]
            z = [mpc(0)] * len(self.level.embeddings)
            for j in range(2 * g):
                if lift[j]:
                    for s in range(len(z)):
                        z[s] += lift[j] * self.matrix[j][s]
            out.append([t / self.ell for t in z])
        return out, plane, mu, epst


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
