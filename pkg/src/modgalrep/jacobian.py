"""Group law on the jacobian of X_1(ell) via subspace arithmetic.

Divisor classes are handled through the section spaces of a fixed ample
divisor.  With g the genus, D0 = D_K + c1 + c2 + c3 has degree 2g+1,
where D_K is the non-cusp zero divisor of a weight-2 form f0 with a
simple zero (in form order) at every cusp.  Then

    V  = H0(3 D0)      dim 5g+4
    W0 = H0(2 D0)      dim 3g+3   (represents D0 itself)
    V2 = H0(D0)        dim g+2

and a degree-(2g+1) divisor D is stored as W_D = H0(3 D0 - D), a
(3g+3)-dimensional subspace of V.

Everything is represented by weight-6 forms F = v * f0^3, so that all
membership conditions become linear conditions on holomorphic forms:
v in H0(3 D0) iff F has form-order >= 3 at every cusp except c1, c2, c3
(where >= 0 suffices).  Forms are stored by their values on a fixed
generic grid of points in cusp disks plus a few leading local expansion
coefficients at every cusp; products of forms are pointwise products of
value vectors, and the grid is large enough (2(11g+7) points) to
separate H0(6 D0), where all products live.

The flip operation sends [D1], [D2] to the class of 3 D0 - D1 - D2 and
in particular negates against W0; add is flip-of-addflip.
"""

import random

from gmpy2 import mpc, mpfr

from .numeric import (PrecisionError, RankUnstableError, default_tol,
                      kernel_and_reduce, mag, row_space, solve_complex,
                      workprec)
from .series import cs_eval, cs_mul

LOCC = 6  # stored local expansion terms per cusp


class Subspace:
    """A subspace of the ambient V, as echelonized coefficient rows."""

    def __init__(self, coeffs, values):
        self.coeffs = coeffs
        self.values = values

    @property
    def dim(self):
        return len(self.coeffs)


class _IncrementalRank:
    """Row echelon state for cheap 'does this row increase the rank'."""

    def __init__(self, ncols, tol):
        self.rows = []
        self.pivcols = []
        self.ncols = ncols
        self.tol = tol

    def try_add(self, row):
        r = list(row)
        scale = max(mag(x) for x in r) + mpfr(1)
        for prow, pc in zip(self.rows, self.pivcols):
            f = r[pc]
            if mag(f) != 0:
                r = [a - f * b for a, b in zip(r, prow)]
        best, bestc = mpfr(0), None
        for c in range(self.ncols):
            m = mag(r[c])
            if m > best:
                best, bestc = m, c
        if best <= self.tol * scale:
            return False
        piv = r[bestc]
        self.rows.append([x / piv for x in r])
        self.pivcols.append(bestc)
        return True

    @property
    def rank(self):
        return len(self.rows)


class Ambient:
    """Fixed model of V = H0(3 D0) and the group-law operations."""

    def __init__(self, level, prec, seed=20170):
        self.level = level
        self.prec = prec
        self.ell = level.ell
        self.g = level.eig.space.g
        self.tol = default_tol(prec)
        self.rng = random.Random(seed)
        with workprec(prec + 64):
            self._build()

    # -- construction ---------------------------------------------------------

    def _grid(self):
        npts = 2 * (11 * self.g + 7)
        cusps = self.level.all_cusps
        pts = []
        for i in range(npts):
            cusp = cusps[i % len(cusps)]
            r = 0.05 * (6.0 ** self.rng.random())     # in [0.05, 0.3]
            th = self.rng.random()
            q = mpc(mpfr(r)) * _unit(th)
            pts.append((cusp, q))
        return pts

    def _build(self):
        level = self.level
        g, ell = self.g, self.ell
        self.npts = 2 * (11 * g + 7)
        self.grid = self._grid()
        cusps = level.all_cusps
        self.base_cusps = (level.c1, level.c2, level.c3)
        cond_cusps = [c for c in cusps if c not in self.base_cusps]

        # weight-2 data: values on the grid and short local expansions
        self.w2 = [self._form_data(form) for form in level.forms]
        self.w2_forms = list(level.forms)
        self.f0 = self._form_data(level.f0)
        self.f0_form = level.f0

        dim_m6 = 5 * g + 3 * ell - 8
        dim_m4 = 3 * g + 2 * ell - 5
        self.cand6 = self._product_span(3, dim_m6)
        cand4 = self._product_span(2, dim_m4)

        # V: order >= 3 at the condition cusps
        self.kerV, self.basisV, self.localV = \
            self._impose(self.cand6, cond_cusps, 3)
        self.dimV = len(self.basisV)
        assert self.dimV == 5 * g + 4, self.dimV

        # W0 = f0 * {weight 4, order >= 2 at the condition cusps}
        _, b4, _ = self._impose(cand4, cond_cusps, 2)
        assert len(b4) == 3 * g + 3, len(b4)
        w0_rows = [self._mul_values(self.f0[0], row) for row in b4]
        self.W0 = self._subspace_from_values(w0_rows)
        assert self.W0.dim == 3 * g + 3

        # V2 = f0^2 * {weight 2, order >= 1 at the condition cusps}
        cands2 = [(t, v, l) for t, (v, l) in enumerate(self.w2)]
        _, b2, _ = self._impose(cands2, cond_cusps, 1)
        assert len(b2) == g + 2, len(b2)
        f0sq = self._mul_values(self.f0[0], self.f0[0])
        v2_rows = [self._mul_values(f0sq, row) for row in b2]
        self.V2 = self._subspace_from_values(v2_rows)
        assert self.V2.dim == g + 2

        # the product space H0(6 D0) must be separated by the grid
        inc = _IncrementalRank(self.npts, self.tol)
        for i in range(self.dimV):
            for j in range(i, self.dimV):
                inc.try_add(self._mul_values(self.basisV[i], self.basisV[j]))
        assert inc.rank == 11 * g + 7, (inc.rank, 11 * g + 7)

    def _form_data(self, form):
        values = []
        for cusp, q in self.grid:
            coeffs = form.at_cusp(cusp)
            values.append(cs_eval(coeffs, q))
        local = {cusp: form.at_cusp(cusp)[:LOCC]
                 for cusp in self.level.all_cusps}
        return values, local

    def _mul_values(self, a, b):
        return [x * y for x, y in zip(a, b)]

    def _product_span(self, arity, target_dim):
        """Products of `arity` weight-2 basis forms spanning the weight space.

        Returns a list of (index tuple, values, locals) of length
        target_dim with independent value rows.
        """
        n = len(self.w2)
        if arity == 2:
            idxs = [(i, j) for i in range(n) for j in range(i, n)]
        else:
            idxs = [(i, j, k) for i in range(n) for j in range(i, n)
                    for k in range(j, n)]
        self.rng.shuffle(idxs)
        inc = _IncrementalRank(self.npts, self.tol)
        kept = []
        for t in idxs:
            vals = self.w2[t[0]][0]
            for i in t[1:]:
                vals = self._mul_values(vals, self.w2[i][0])
            if not inc.try_add(vals):
                continue
            loc = {}
            for cusp in self.level.all_cusps:
                l = self.w2[t[0]][1][cusp]
                for i in t[1:]:
                    l = cs_mul(l, self.w2[i][1][cusp], LOCC)
                loc[cusp] = l
            kept.append((t, vals, loc))
            if len(kept) == target_dim:
                return kept
        raise PrecisionError("products never spanned the weight space "
                             "(%d of %d)" % (len(kept), target_dim))

    def _impose(self, cands, cond_cusps, order):
        """Kernel of 'vanishing to `order` at each condition cusp'.

        Returns (kernel vectors over cands, value rows, local data).
        """
        mat = []
        for cusp in cond_cusps:
            for k in range(order):
                mat.append([c[2][cusp][k] for c in cands])
        ker = kernel_and_reduce(mat, self.tol)
        rows, locs = [], []
        for vec in ker.vectors:
            row = [mpc(0)] * self.npts
            for x, c in zip(vec, cands):
                if mag(x) != 0:
                    for p in range(self.npts):
                        row[p] += x * c[1][p]
            rows.append(row)
            loc = {}
            for cusp in self.level.all_cusps:
                acc = [mpc(0)] * LOCC
                for x, c in zip(vec, cands):
                    if mag(x) != 0:
                        for k in range(LOCC):
                            acc[k] += x * c[2][cusp][k]
                loc[cusp] = acc
            locs.append(loc)
        return [list(v) for v in (k for k in (ker.vectors))], rows, locs

    # -- evaluation away from the grid ----------------------------------------

    def eval_basis_at(self, cusp, q, deriv=False):
        """Values (and optionally q-derivatives) of the V basis at a point.

        The point is given in the local coordinate of the cusp disk.
        """
        w2v, w2d = {}, {}

        def w2_at(i):
            if i not in w2v:
                coeffs = self.w2_forms[i].at_cusp(cusp)
                w2v[i] = cs_eval(coeffs, q)
                if deriv:
                    dcoeffs = [n * c for n, c in enumerate(coeffs)][1:]
                    w2d[i] = cs_eval(dcoeffs, q)
            return w2v[i]

        cvals, cders = [], []
        for t, _, _ in self.cand6:
            vs = [w2_at(i) for i in t]
            cvals.append(vs[0] * vs[1] * vs[2])
            if deriv:
                d = (w2d[t[0]] * vs[1] * vs[2]
                     + vs[0] * w2d[t[1]] * vs[2]
                     + vs[0] * vs[1] * w2d[t[2]])
                cders.append(d)
        vals = [sum((x * cv for x, cv in zip(vec, cvals)), mpc(0))
                for vec in self.kerV]
        if not deriv:
            return vals
        ders = [sum((x * cd for x, cd in zip(vec, cders)), mpc(0))
                for vec in self.kerV]
        return vals, ders

    def subspace_from_points(self, points):
        """W_D for D = sum of the given (cusp, q) points, deg 2g+1."""
        assert len(points) == 2 * self.g + 1
        mat = [self.eval_basis_at(cusp, q) for cusp, q in points]
        ker = kernel_and_reduce(mat, self.tol)
        if ker.dim != 3 * self.g + 3:
            raise PrecisionError("point divisor cut dimension %d, "
                                 "expected %d" % (ker.dim, 3 * self.g + 3))
        return self.subspace(ker.matrix())

    # -- subspaces of V -------------------------------------------------------

    def _subspace_from_values(self, rows):
        """Express value rows in the V basis (with a consistency check)."""
        mat = [[self.basisV[j][p] for j in range(self.dimV)]
               for p in range(self.npts)]
        coeffs = []
        for row in rows:
            x = solve_complex(mat, row, self.tol)
            scale = max(mag(v) for v in row) + mpfr(1)
            for p in range(self.npts):
                r = sum((x[j] * self.basisV[j][p] for j in range(self.dimV)),
                        mpc(0)) - row[p]
                if mag(r) > self.tol * scale * 100:
                    raise PrecisionError("value row is not in V "
                                         "(residual %s)" % mag(r))
            coeffs.append(x)
        return self.subspace(coeffs)

    def subspace(self, coeff_rows):
        values = [self._values_of(x) for x in coeff_rows]
        return Subspace(coeff_rows, values)

    def _values_of(self, x):
        row = [mpc(0)] * self.npts
        for j, c in enumerate(x):
            if mag(c) != 0:
                for p in range(self.npts):
                    row[p] += c * self.basisV[j][p]
        return row

    def local_of(self, x, cusp):
        """Local expansion (LOCC terms) of the V element with coeffs x."""
        acc = [mpc(0)] * LOCC
        for j, c in enumerate(x):
            if mag(c) != 0:
                loc = self.localV[j][cusp]
                for k in range(LOCC):
                    acc[k] += c * loc[k]
        return acc

    def intersect(self, A, B):
        mat = []
        for r in range(self.dimV):
            mat.append([A.coeffs[i][r] for i in range(A.dim)]
                       + [-B.coeffs[i][r] for i in range(B.dim)])
        ker = kernel_and_reduce(mat, self.tol)
        out = []
        for vec in ker.vectors:
            row = [sum((vec[i] * A.coeffs[i][r] for i in range(A.dim)),
                       mpc(0)) for r in range(self.dimV)]
            out.append(row)
        return self.subspace(out)

    # -- group law ------------------------------------------------------------

    def _solve_membership(self, svals_list, target_rows):
        """{v in V : v * s_i in span(target_rows) for all i}."""
        funcs = kernel_and_reduce(target_rows, self.tol).vectors
        mat = []
        for svals in svals_list:
            prods = [self._mul_values(self.basisV[j], svals)
                     for j in range(self.dimV)]
            for phi in funcs:
                mat.append([sum((phi[p] * prods[j][p]
                                 for p in range(self.npts)), mpc(0))
                            for j in range(self.dimV)])
        ker = kernel_and_reduce(mat, self.tol)
        return self.subspace(ker.matrix())

    def _double_section_space(self, W):
        """H0(3 D0 - 2D) from W = W_D, via products with W0."""
        prods = []
        inc = _IncrementalRank(self.npts, self.tol)
        for i in range(W.dim):
            for j in range(i, W.dim):
                row = self._mul_values(W.values[i], W.values[j])
                prods.append(row)
                inc.try_add(row)
        if inc.rank != 7 * self.g + 5:
            raise PrecisionError("H0(6D0-2D) has rank %d, expected %d"
                                 % (inc.rank, 7 * self.g + 5))
        return self._solve_membership(self.W0.values, prods)

    def _spans_equal(self, A, B):
        if A.dim != B.dim:
            return False
        inc = _IncrementalRank(self.npts, self.tol)
        for row in A.values:
            inc.try_add(row)
        base = len(inc.rows)
        for row in B.values:
            inc.try_add(row)
        return len(inc.rows) == base

    def addflip(self, A, B, tries=6):
        """Class of 3 D0 - D_A - D_B, as a subspace W_E."""
        same = A is B
        if not same:
            S = self.intersect(A, B)
            # an intersection of full dimension means A and B carry the
            # same divisor without being the same object
            same = S.dim == 3 * self.g + 3
        if same:
            if self._spans_equal(A, self.W0):
                # both inputs carry D0 itself, so the result is the zero
                # class; the section-space route degenerates here
                return self.W0
            S = self._double_section_space(A)
        if S.dim != self.g + 2:
            raise PrecisionError("section space has dim %d, expected %d"
                                 % (S.dim, self.g + 2))
        last = None
        for _ in range(tries):
            r = [self.rng.randint(-3, 3) for _ in range(S.dim)]
            if not any(r):
                continue
            svals = [sum((r[i] * S.values[i][p] for i in range(S.dim)),
                         mpc(0)) for p in range(self.npts)]
            sV = [self._mul_values(svals, self.basisV[j])
                  for j in range(self.dimV)]
            try:
                W = self._solve_membership(S.values, sV)
            except RankUnstableError as exc:
                last = exc
                continue
            if W.dim == 3 * self.g + 3:
                return W
            last = PrecisionError("flip gave dim %d" % W.dim)
        raise last or PrecisionError("flip failed")

    def flip(self, A):
        """The negated class: addflip against W0."""
        return self.addflip(A, self.W0)

    negate = flip

    def add(self, A, B):
        return self.flip(self.addflip(A, B))

    def double(self, A):
        return self.flip(self.addflip(A, A))

    def scalar_mul(self, A, n):
        if n == 0:
            return self.W0
        if n < 0:
            return self.flip(self.scalar_mul(A, -n))
        acc = None
        base = A
        while n:
            if n & 1:
                acc = base if acc is None else self.add(acc, base)
            n >>= 1
            if n:
                base = self.double(base)
        return acc

    def is_class_zero(self, A):
        """Whether D_A ~ D0, i.e. the class of A is the identity."""
        inter = self.intersect(self.V2, A)
        return inter.dim > 0

    def class_eq(self, A, B):
        return self.is_class_zero(self.addflip(self.flip(A), B))


def _unit(theta):
    import gmpy2
    t = 2 * gmpy2.const_pi() * mpfr(theta)
    return mpc(gmpy2.cos(t), gmpy2.sin(t))
