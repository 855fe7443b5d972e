"""ell-torsion points of the jacobian as explicit divisor subspaces.

A torsion target z in C^g (from the period lattice and the mod-ell
eigenplane) is realised as a divisor class in three steps:

1. z is reduced modulo the period lattice and divided by 2^m, so that
   the result is small enough for Newton inversion of the Abel-Jacobi
   map to converge from the fixed reference divisor;
2. the g moving points of a divisor D1 are solved for so that
   AJ(D1 - R) = z / 2^m, where R is the reference divisor; the class
   [D1 - R] is then formed with the subspace group law, which never
   needs the (unknown) non-cusp part of D0;
3. the class is doubled m times and verified to be ell-torsion.

All integrals are short antiderivative differences inside cusp disks:
with omega = 2 pi i f dtau and local parameter q at a width-h cusp,
int omega = h * sum_n c_n (q1^n - q0^n) / n.
"""

import random

import gmpy2
from gmpy2 import mpc, mpfr

from .numeric import PrecisionError, mag, solve_complex, workprec


class TorsionContext:
    def __init__(self, ambient, lattice, seed=4099):
        self.amb = ambient
        self.lat = lattice
        self.level = ambient.level
        self.g = ambient.g
        self.ell = ambient.ell
        self.prec = ambient.prec
        self.rng = random.Random(seed)
        with workprec(self.prec + 64):
            self._setup()

    def _setup(self):
        # reference divisor: 2g+1 deterministic points in cusp disks;
        # the first g move during Newton inversion, the rest stay fixed
        cusps = self.level.all_cusps
        pts = []
        for i in range(2 * self.g + 1):
            cusp = cusps[(3 * i + 1) % len(cusps)]
            r = 0.12 + 0.1 * self.rng.random()
            th = self.rng.random()
            t = 2 * gmpy2.const_pi() * mpfr(th)
            pts.append((cusp, mpc(mpfr(r)) * mpc(gmpy2.cos(t), gmpy2.sin(t))))
        self.base_points = pts
        self.W_R = self.amb.subspace_from_points(pts)
        # local expansions of every embedded eigenform at the base cusps
        self._fser = {}
        for s, emb in enumerate(self.level.embeddings):
            for cusp, _ in pts:
                if (s, cusp) not in self._fser:
                    self._fser[(s, cusp)] = emb["form"].at_cusp(cusp)

    # -- Abel-Jacobi in the disks ----------------------------------------------

    def _antider_diff(self, s, cusp, q0, q1):
        """h * sum_n c_n (q1^n - q0^n) / n for the s-th eigenform."""
        c = self._fser[(s, cusp)]
        h = self.level.cusp_width(cusp)
        acc = mpc(0)
        p0, p1 = mpc(1), mpc(1)
        for n in range(1, len(c)):
            p0 *= q0
            p1 *= q1
            if mag(c[n]) != 0:
                acc += c[n] * (p1 - p0) / n
        return h * acc

    def aj_diff(self, moving_qs):
        """AJ(D1 - R) where D1 has the given q's at the first g points."""
        out = [mpc(0)] * self.g
        for i in range(self.g):
            cusp, q0 = self.base_points[i]
            for s in range(self.g):
                out[s] += self._antider_diff(s, cusp, q0, moving_qs[i])
        return out

    def _jacobian_row(self, s, i, q):
        cusp = self.base_points[i][0]
        c = self._fser[(s, cusp)]
        h = self.level.cusp_width(cusp)
        # h * f(q) / q, with f = sum_{n>=1} c_n q^n
        acc = mpc(0)
        p = mpc(1)
        for n in range(1, len(c)):
            if mag(c[n]) != 0:
                acc += c[n] * p  # derivative of q^n / n is q^{n-1}
            p *= q
        return h * acc

    def newton_invert(self, target, max_iter=60):
        """Moving q's with AJ(D1 - R) = target; raises if outside basin."""
        qs = [self.base_points[i][1] for i in range(self.g)]
        tol = mpfr(2) ** (-(self.prec - 8))
        for _ in range(max_iter):
            F = self.aj_diff(qs)
            resid = [f - t for f, t in zip(F, target)]
            if max(mag(r) for r in resid) < tol:
                return qs
            J = [[self._jacobian_row(s, i, qs[i]) for i in range(self.g)]
                 for s in range(self.g)]
            try:
                step = solve_complex(J, resid, self.amb.tol)
            except Exception:
                raise PrecisionError("singular AJ jacobian")
            qs = [q - d for q, d in zip(qs, step)]
            for q in qs:
                a = abs(q)
                if a < 0.005 or a > 0.4:
                    raise PrecisionError("Newton left the cusp disk")
        raise PrecisionError("AJ inversion did not converge")

    # -- lattice reduction -------------------------------------------------------

    def reduce_mod_lattice(self, z):
        """A small representative of z modulo the period lattice."""
        g = self.g
        rows = self.lat.matrix  # 2g x g complex
        mat = []
        for j in range(2 * g):
            mat.append([mpc(x) for x in
                        [rows[j][s].real for s in range(g)]
                        + [rows[j][s].imag for s in range(g)]])
        rhs = [mpc(z[s].real) for s in range(g)] + \
              [mpc(z[s].imag) for s in range(g)]
        # t with z = sum t_j Pi_j (real t); transpose the system
        matT = [[mat[j][k] for j in range(2 * g)] for k in range(2 * g)]
        t = solve_complex(matT, rhs, self.amb.tol)
        out = list(z)
        for j in range(2 * g):
            n = int(gmpy2.rint(t[j].real))
            if n:
                for s in range(g):
                    out[s] -= n * rows[j][s]
        return out

    # -- the torsion construction -------------------------------------------------

    def class_from_target(self, z, m):
        """The divisor class with AJ = z, built via inversion at z / 2^m."""
        w = [x / (1 << m) for x in z]
        qs = self.newton_invert(w)
        pts = [(self.base_points[i][0], qs[i]) for i in range(self.g)] \
            + self.base_points[self.g:]
        W_D1 = self.amb.subspace_from_points(pts)
        x = self.amb.add(W_D1, self.amb.flip(self.W_R))
        for _ in range(m):
            x = self.amb.double(x)
        return x

    def torsion_subspace(self, form, which=0, m_list=(6, 8, 10, 12)):
        """An ell-torsion class from the mod-ell eigenplane, verified.

        Returns (subspace, plane, mu, eps_tilde).
        """
        with workprec(self.prec + 64):
            zs, plane, mu, epst = self.lat.torsion_point(form)
            z = self.reduce_mod_lattice(zs[which])
            last = None
            for m in m_list:
                try:
                    x = self.class_from_target(z, m)
                except PrecisionError as exc:
                    last = exc
                    continue
                if self.amb.is_class_zero(x):
                    raise PrecisionError("torsion class collapsed to zero")
                if not self.amb.is_class_zero(
                        self.amb.scalar_mul(x, self.ell)):
                    raise PrecisionError("class is not ell-torsion")
                return x, plane, mu, epst
            raise last or PrecisionError("no m in m_list worked")
