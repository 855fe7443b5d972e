"""Evaluation of the mod-ell plane: alpha values and the polynomial F.

Each nonzero point x of the ell-torsion eigenplane gives a divisor
class; the evaluation map sends it to a number alpha(x) so that

    F(X) = prod_{x != 0} (X - alpha(x))

has rational coefficients of degree ell^2 - 1.  alpha is built to depend
only on the class, not on the representative divisor the group law
happens to produce:

1. inside W_D the section s_D is pinned down (up to scalar) by cusp
   vanishing of total degree 3g+2 at c1, c2, c3; its remaining zero
   divisor Pi has degree g and canonical class, hence (generically) is
   the unique effective representative: Pi depends only on x;
2. the residual space R = {v in V : v W_D c s_D V} = H0(3D0 - C1 - Pi)
   is then canonical, of dimension g+2;
3. one more batch of g+1 cusp conditions cuts R to a line spanned by t,
   and alpha(x) = t(A) / t(B) for two fixed rational cusps A, B, which
   removes the scalar ambiguity.

Degenerate configurations (t vanishing at A or B, unstable kernels) are
handled by restarting the whole run with the next evaluation config:
the conditions and the pair (A, B) move together so that every alpha in
one run uses the same canonical map.
"""

from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from .numeric import (PrecisionError, RecognitionError, kernel_and_reduce,
                      mag, rational_reconstruct, workprec)


class DegenerateConfigError(Exception):
    """The evaluation config hit a zero/pole at an evaluation cusp."""


class Evaluator:
    def __init__(self, ambient, prec, config=0):
        self.amb = ambient
        self.level = ambient.level
        self.g = ambient.g
        self.ell = ambient.ell
        self.prec = prec
        self.config = config
        self._setup_config(config)

    def _setup_config(self, c):
        level, g = self.level, self.g
        # rigidifying conditions: orders (g+1, g+1, g) at (c1, c2, c3),
        # total degree 3g+2, leaving a line in W_D
        self.cond1 = ([(level.c1, k) for k in range(g + 1)]
                      + [(level.c2, k) for k in range(g + 1)]
                      + [(level.c3, k) for k in range(g)])
        # second batch: g+1 more orders, placement rotates with config
        spots = [level.c3, level.c1, level.c2]
        base = {level.c1: g + 1, level.c2: g + 1, level.c3: g}
        cusp2 = spots[c % 3]
        self.cond2 = [(cusp2, base[cusp2] + k) for k in range(g + 1)]
        # evaluation cusps
        pairs = [(level.cusp_A, level.cusp_B)] + \
            [(a, b) for a in [level.cusp_A, level.cusp_B]
             for b in level.alt_eval_cusps] + \
            [(a, b) for a in level.alt_eval_cusps
             for b in level.alt_eval_cusps if a != b]
        self.cusp_A, self.cusp_B = pairs[(c // 3) % len(pairs)]

    # -- canonical section machinery -------------------------------------------

    def _line_with_conditions(self, coeff_rows, conds):
        """The 1-dim subspace of span(rows) killed by the cusp conditions."""
        amb = self.amb
        mat = []
        for cusp, k in conds:
            row = []
            for x in coeff_rows:
                loc = amb.local_of(x, cusp)
                row.append(loc[k])
            mat.append(row)
        ker = kernel_and_reduce(mat, amb.tol)
        if ker.dim != 1:
            raise DegenerateConfigError("conditions cut dimension %d, "
                                        "wanted a line" % ker.dim)
        vec = ker.vectors[0]
        out = [mpc(0)] * amb.dimV
        for xc, row in zip(vec, coeff_rows):
            if mag(xc) != 0:
                for r in range(amb.dimV):
                    out[r] += xc * row[r]
        return out

    def _residual_space(self, W, s_coeff):
        amb = self.amb
        svals = amb._values_of(s_coeff)
        sV = [amb._mul_values(svals, amb.basisV[j]) for j in range(amb.dimV)]
        R = amb._solve_membership(W.values, sV)
        if R.dim != self.g + 2:
            raise PrecisionError("residual space has dim %d, expected %d"
                                 % (R.dim, self.g + 2))
        return R

    def alpha(self, W):
        """The canonical value attached to the class of W."""
        amb = self.amb
        s = self._line_with_conditions(W.coeffs, self.cond1)
        R = self._residual_space(W, s)
        t = self._line_with_conditions(R.coeffs, self.cond2)
        la = amb.local_of(t, self.cusp_A)
        lb = amb.local_of(t, self.cusp_B)
        fa = self.level.f0_leading[self.cusp_A]
        fb = self.level.f0_leading[self.cusp_B]
        va = la[3] / fa ** 3
        vb = lb[3] / fb ** 3
        scale = max(mag(x) for x in t) + mpfr(1)
        floor = gmpy2.sqrt(amb.tol) * scale
        if mag(va) < floor or mag(vb) < floor:
            raise DegenerateConfigError("t vanishes at an evaluation cusp")
        return va / vb

    # -- the full plane ----------------------------------------------------------

    def plane_classes(self, x1, x2):
        """Subspaces for a*x1 + b*x2 over all (a, b) != (0, 0) mod ell."""
        amb, ell = self.amb, self.ell
        with workprec(self.prec + 64):
            m1 = [None] * ell
            m2 = [None] * ell
            m1[1], m2[1] = x1, x2
            for a in range(2, ell):
                m1[a] = amb.add(m1[a - 1], x1)
                m2[a] = amb.add(m2[a - 1], x2)
            out = {}
            for a in range(ell):
                for b in range(ell):
                    if a == 0 and b == 0:
                        continue
                    if a == 0:
                        out[(a, b)] = m2[b]
                    elif b == 0:
                        out[(a, b)] = m1[a]
                    else:
                        out[(a, b)] = amb.add(m1[a], m2[b])
            return out

    def all_alphas(self, classes):
        with workprec(self.prec + 64):
            return {key: self.alpha(W) for key, W in classes.items()}


def product_poly(roots):
    """Monic polynomial with the given complex roots, coefficient list
    constant-first, via a balanced product tree."""
    polys = [[-r, mpc(1)] for r in roots]
    if not polys:
        return [mpc(1)]
    while len(polys) > 1:
        nxt = []
        for i in range(0, len(polys) - 1, 2):
            nxt.append(_pmul(polys[i], polys[i + 1]))
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


def _pmul(a, b):
    out = [mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if mag(x) != 0:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def recognise_poly(coeffs, prec, jump=10 ** 8):
    """Rational coefficients of a monic complex polynomial.

    Uses continued fractions with a large-quotient acceptance test; once
    one denominator is known, the lcm so far is used as a hint for the
    rest (the coefficients share small denominators in practice).
    """
    tol = mpfr(2) ** (-(prec // 4))
    out = []
    den = 1
    for c in reversed(coeffs):  # leading first: small numbers first
        if mag(mpc(c).imag) > tol * (1 + mag(c)):
            raise RecognitionError("coefficient has a large imaginary part")
        x = mpc(c).real
        try:
            fr = rational_reconstruct(x, jump=jump, denom_hint=den, tol=tol)
            if abs(mpfr(fr.numerator) / mpfr(fr.denominator) - x) \
                    > tol * (1 + abs(x)):
                raise RecognitionError("hint reconstruction off")
        except RecognitionError:
            fr = rational_reconstruct(x, jump=jump, tol=tol)
        den = den * fr.denominator // gmpy2.gcd(den, fr.denominator)
        out.append(fr)
    out.reverse()
    return out


def build_F(alphas, prec):
    """(F, labels): F monic of degree ell^2-1 over QQ, labels the key
    order matching the root order used for the product."""
    keys = sorted(alphas.keys())
    roots = [alphas[k] for k in keys]
    with workprec(prec + 64):
        poly = product_poly(roots)
        fr = recognise_poly(poly, prec)
    return fr, keys
