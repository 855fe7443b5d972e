"""Weight-2 forms on X_1(ell) with q-expansions at every cusp.

The catalog holds the g cuspidal eigenform embeddings and the ell-2
Eisenstein series E2^{chi,1}, E2^{1,chi} (chi even nontrivial) plus
e_ell = E2(tau) - ell*E2(ell*tau).  Expansions at the cusps above 0 go
through the Fricke involution; rather than trusting a bookkeeping-heavy
pseudo-eigenvalue formula, each multiplier is measured numerically at
two independent points and cross-checked, so a convention slip shows up
as a loud failure instead of a silent sign error.

Cusp conventions: classes ('inf', a) have width 1 and carry chibar(a)
times the expansion at infinity; classes ('zero', c) have width ell and
carry chi(c) times the expansion at 0 (in q_ell = exp(2 pi i tau/ell)).
"""

import gmpy2
from gmpy2 import mpc, mpfr

from .modsym import HeckeEigendata, orbit_factors, _primitive_root
from .numeric import PrecisionError, to_mpc, workprec


def _two_pi():
    return 2 * gmpy2.const_pi()


def _exp_2pii(x):
    """exp(2 pi i x) for a real gmpy2/float x."""
    t = _two_pi() * mpfr(x)
    return mpc(gmpy2.cos(t), gmpy2.sin(t))


def _eval_q_series(coeffs, tau, width=1):
    """Evaluate sum c_n q^n with q = exp(2 pi i tau / width) by Horner."""
    q = gmpy2.exp(mpc(0, 1) * _two_pi() * tau / width)
    acc = mpc(0)
    for c in reversed(coeffs):
        acc = acc * q + c
    return acc


class Weight2Form:
    """One weight-2 form: expansions at infinity and (via Fricke) at 0.

    chi_of(e) gives the nebentypus value; the expansion at any cusp is a
    scalar multiple of one of the two stored series.
    """

    def __init__(self, name, inf_coeffs, chi_of, ell):
        self.name = name
        self.inf = inf_coeffs          # [c0, c1, ...] in q
        self.chi_of = chi_of           # callable on units mod ell
        self.ell = ell
        self.zero = None               # set once Fricke data is known

    def at_cusp(self, cusp):
        """Local expansion at a cusp class, in its own local parameter."""
        kind, e = cusp
        if kind == 'inf':
            fac = 1 / self.chi_of(e)
            return [fac * c for c in self.inf]
        fac = self.chi_of(e)
        return [fac * c for c in self.zero]

    def leading_order(self, cusp):
        """(order, coefficient) of the first nonzero local term."""
        coeffs = self.at_cusp(cusp)
        for n, c in enumerate(coeffs):
            if abs(c) > self._tiny:
                return n, c
        raise PrecisionError("form vanishes to full stored order at %s"
                             % (cusp,))


def fricke_multiplier(f_inf, target_inf, ell, prec, nterms):
    """c with f|W_ell = c * target, measured at two points and checked."""
    vals = []
    for t in ("1.131", "1.343"):
        tau = mpc(0, 1) * mpfr(t) / gmpy2.sqrt(mpfr(ell))
        lhs = _eval_q_series(f_inf, -1 / (ell * tau)) / (ell * tau * tau)
        rhs = _eval_q_series(target_inf, tau)
        vals.append(lhs / rhs)
    spread = abs(vals[0] - vals[1]) / max(abs(vals[0]), mpfr(2) ** (-prec))
    if spread > mpfr(2) ** (-prec // 2):
        raise PrecisionError(
            "Fricke image is not proportional to the expected form "
            "(relative spread %s)" % spread)
    return vals[0]


class LevelData:
    """Everything numeric about weight-2 forms at one level and precision."""

    def __init__(self, eig, prec, nterms=None):
        self.eig = eig
        self.space = eig.space
        self.ell = eig.space.ell
        self.prec = prec
        if nterms is None:
            nterms = int(prec * 0.75) + 80
        self.nterms = nterms
        with workprec(prec + 64):
            self._build()

    # -- characters ----------------------------------------------------------

    def _build_characters(self):
        ell = self.ell
        self.g0 = _primitive_root(ell)
        self.m = (ell - 1) // 2
        dlog = {}
        x = 1
        for s in range(ell - 1):
            dlog[x] = s
            x = x * self.g0 % ell
        self.dlog = dlog
        # chi_t(g0^s) = exp(2 pi i t s / m), t = 0..m-1: the even characters
        self.zeta_m = [_exp_2pii(mpfr(j) / self.m) for j in range(self.m)]

    def chi(self, t, a):
        a %= self.ell
        return self.zeta_m[(t * self.dlog[a]) % self.m]

    # -- the catalog ---------------------------------------------------------

    def _build(self):
        ell = self.ell
        N = self.nterms
        tiny = mpfr(2) ** (-(self.prec // 2))
        self._build_characters()
        an_exact = self.eig.an_polys(N)
        facs = orbit_factors(self.eig)

        self.embeddings = []
        forms = []
        for fac in facs:
            s_o = fac["poly"]
            for seed in fac["roots"]:
                lam = self._refine_root(s_o, seed)
                an = [mpc(0)] * N
                for n in range(1, N):
                    an[n] = HeckeEigendata.eval_at_root(an_exact[n], lam)
                # nebentypus: snap to the exact root of unity
                t = self._snap_char(lam, fac["eps_order"])
                form = Weight2Form("cusp:%s" % str(complex(lam)), an,
                                   lambda e, t=t: self.chi(t, e), ell)
                form._tiny = tiny
                conj_an = [gmpy2.mpc(c).conjugate() for c in an]
                w_mult = fricke_multiplier(an, conj_an, ell, self.prec, N)
                if abs(abs(w_mult) - 1) > tiny:
                    raise PrecisionError("cuspidal Fricke multiplier "
                                         "should have modulus 1")
                form.zero = [w_mult / ell * c for c in conj_an]
                forms.append(form)
                self.embeddings.append({
                    "orbit": fac, "root": lam, "an": an, "chi_t": t,
                    "lam": w_mult, "form": form,
                })
        self.cusp_embeddings = list(self.embeddings)

        # Eisenstein series for each even nontrivial character
        self.eis = {}
        for t in range(1, self.m):
            e_chi1 = self._e2_series(t, 0, N)
            e_1chi = self._e2_series(0, t, N)
            tbar = (-t) % self.m
            f1 = Weight2Form("E2(chi%d,1)" % t, e_chi1,
                             lambda e, t=t: self.chi(t, e), ell)
            f1._tiny = tiny
            e_1chibar = self._e2_series(0, tbar, N)
            c1 = fricke_multiplier(e_chi1, e_1chibar, ell, self.prec, N)
            f1.zero = [c1 / ell * c for c in e_1chibar]
            f2 = Weight2Form("E2(1,chi%d)" % t, e_1chi,
                             lambda e, t=t: self.chi(t, e), ell)
            f2._tiny = tiny
            e_chibar1 = self._e2_series(tbar, 0, N)
            c2 = fricke_multiplier(e_1chi, e_chibar1, ell, self.prec, N)
            f2.zero = [c2 / ell * c for c in e_chibar1]
            self.eis[("chi1", t)] = f1
            self.eis[("1chi", t)] = f2
            forms.extend([f1, f2])
        # e_ell = E2 - ell E2(ell tau), trivial character
        e2 = self._e2_level1(N)
        e_ell = [e2[n] - (ell * e2[n // ell] if n % ell == 0 else 0)
                 for n in range(N)]
        f3 = Weight2Form("e_ell", e_ell, lambda e: mpc(1), ell)
        f3._tiny = tiny
        c3 = fricke_multiplier(e_ell, e_ell, ell, self.prec, N)
        if abs(c3 + 1) > tiny:
            raise PrecisionError("e_ell should be anti-invariant under W")
        f3.zero = [c3 / ell * c for c in e_ell]
        self.eis[("triv", 0)] = f3
        forms.append(f3)
        assert len(forms) == len(self.embeddings) + ell - 2
        self.forms = forms
        self._label_cusps()
        self._build_f0()

    def _refine_root(self, poly, seed):
        z = to_mpc(seed.real, seed.imag)
        dpoly = [i * poly[i] for i in range(1, len(poly))]
        for _ in range(self.prec):
            num = HeckeEigendata.eval_at_root(poly, z)
            den = HeckeEigendata.eval_at_root(dpoly, z)
            step = num / den
            z = z - step
            if abs(step) < mpfr(2) ** (-self.prec - 16) * max(1, abs(z)):
                break
        return z

    def _snap_char(self, lam, order_hint):
        """Index t of the form's nebentypus among the even characters."""
        val = HeckeEigendata.eval_at_root(self.eig.eps_poly(self.g0), lam)
        best = min(range(self.m), key=lambda j: abs(val - self.zeta_m[j]))
        if abs(val - self.zeta_m[best]) > mpfr(2) ** (-self.prec // 2):
            raise PrecisionError("nebentypus value did not snap to a "
                                 "root of unity")
        return best

    def _e2_series(self, t_psi, t_phi, N):
        """E2^{psi,phi} with psi = chi_{t_psi}, phi = chi_{t_phi}.

        Normalization: constant term -(1/2) sum phi(a) a (a/ell + 1) when
        psi is trivial (else 0), and q^n coefficient
        2 sum_{d | n} psi(n/d) phi(d) d.  Only used with at least one of
        psi, phi trivial, both even.
        """
        ell = self.ell
        out = [mpc(0)] * N

        def chi_or_triv(t, a):
            # t == 0 stands for the character mod 1, not the trivial
            # character mod ell, so it is 1 on everything
            if t == 0:
                return mpc(1)
            if a % ell == 0:
                return mpc(0)
            return self.chi(t, a)

        if t_psi == 0:
            acc = mpc(0)
            for a in range(1, ell):
                acc += chi_or_triv(t_phi, a) * a * (mpfr(a) / ell + 1)
            out[0] = -acc / 2
        for d in range(1, N):
            if t_phi != 0 and d % ell == 0:
                continue
            phi_d = chi_or_triv(t_phi, d)
            for n in range(d, N, d):
                psi = chi_or_triv(t_psi, n // d)
                out[n] += 2 * psi * phi_d * d
        return out

    def _e2_level1(self, N):
        out = [mpc(1)] + [mpc(0)] * (N - 1)
        for d in range(1, N):
            for n in range(d, N, d):
                out[n] += -24 * d
        return out

    # -- cusp labels and the base forms --------------------------------------

    def _label_cusps(self):
        """Pin down c1, c2, c3 and the evaluation cusps A, B.

        c1 is the cusp Gamma_1(ell)*0.  c2 and c3 are calibrated as the
        second cusp above 0 where the Eisenstein combinations with
        (1 - chi(2)) resp. (1 - chi(3)) coefficients fail to vanish.
        A and B are the first two remaining cusps above 0.
        """
        ell = self.ell
        zero_cusps = [('zero', e) for e in range(1, (ell - 1) // 2 + 1)]
        self.zero_cusps = zero_cusps
        tiny = mpfr(2) ** (-(self.prec // 2))

        def nonvanishing(mult):
            # leading coefficients at 0-cusps of
            # sum_chi (1 - chi(mult)) / (g(chi) S_chi) E2^{chi,1}
            hits = []
            for cusp in zero_cusps:
                e = cusp[1]
                acc = mpc(0)
                for t in range(1, self.m):
                    gchi = sum(self.chi(t, a) * _exp_2pii(mpfr(a) / ell)
                               for a in range(1, ell))
                    schi = sum(self.chi(-t % self.m, a) * a *
                               (mpfr(a) / ell + 1) for a in range(1, ell))
                    lead = self.eis[("chi1", t)].at_cusp(cusp)[0]
                    acc += (1 - self.chi(t, mult)) / (gchi * schi) * lead
                if abs(acc) > tiny:
                    hits.append(cusp)
            return hits

        hits2 = nonvanishing(2)
        hits3 = nonvanishing(3)
        c1 = ('zero', 1)
        assert c1 in hits2 and c1 in hits3, (hits2, hits3)
        assert len(hits2) == 2 and len(hits3) == 2, (hits2, hits3)
        self.c1 = c1
        self.c2 = [c for c in hits2 if c != c1][0]
        self.c3 = [c for c in hits3 if c != c1][0]
        assert self.c2 != self.c3
        rest = [c for c in zero_cusps
                if c not in (self.c1, self.c2, self.c3)]
        self.cusp_A, self.cusp_B = rest[0], rest[1]
        self.alt_eval_cusps = rest[2:]

    def _build_f0(self):
        """A cusp form with a simple zero (in form order) at every cusp."""
        space = self.space
        tiny = mpfr(2) ** (-(self.prec // 2))
        cusps = ([('inf', e) for e in range(1, (self.ell - 1) // 2 + 1)]
                 + self.zero_cusps)
        self.all_cusps = cusps
        for attempt in range(8):
            coeffs = [1 + ((attempt * (i + 1)) % 3) for i in
                      range(len(self.cusp_embeddings))]
            lead = {}
            ok = True
            for cusp in cusps:
                acc = mpc(0)
                for c, emb in zip(coeffs, self.cusp_embeddings):
                    loc = emb["form"].at_cusp(cusp)
                    acc += c * loc[1]
                if abs(acc) < tiny:
                    ok = False
                    break
                lead[cusp] = acc
            if ok:
                self.f0_combo = coeffs
                self.f0_leading = lead
                self.f0 = self._combine(coeffs)
                return
        raise PrecisionError("no generic f0 found")

    def _combine(self, coeffs):
        N = self.nterms
        inf = [mpc(0)] * N
        zero = [mpc(0)] * N
        for c, emb in zip(coeffs, self.cusp_embeddings):
            for n in range(N):
                inf[n] += c * emb["form"].inf[n]
                zero[n] += c * emb["form"].zero[n]
        # the combination is not an eigenform; its cusp expansions are
        # sums of the eigenform ones, so store per-cusp lists instead
        f = Weight2Form("f0", inf, None, self.ell)
        f._tiny = mpfr(2) ** (-(self.prec // 2))
        f._parts = list(zip(coeffs, self.cusp_embeddings))
        f.zero = zero

        def at_cusp(cusp):
            out = [mpc(0)] * N
            for c, emb in f._parts:
                loc = emb["form"].at_cusp(cusp)
                for n in range(N):
                    out[n] += c * loc[n]
            return out

        f.at_cusp = at_cusp
        return f

    def cusp_width(self, cusp):
        return 1 if cusp[0] == 'inf' else self.ell
