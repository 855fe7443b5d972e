"""Frobenius similarity classes from resolvents of the quotient polynomial.

The Galois group acts on the nonzero plane F_ell^2 \\ 0 through
GL_2(F_ell).  Quotienting the root labels by the odd-order subgroup
S <= F_ell^* kills the obstruction to writing everything over QQ with
manageable degrees: the quotient polynomial

    Ftilde(X) = prod_{orbits Sx} (X - sum_{s in S} alpha(s x))

has degree (ell^2-1)/|S| and the Galois image acts on its roots through
Gbar = GL_2(F_ell)/S.  For every conjugacy class C of Gbar a resolvent

    Gamma_C(Y) = prod_{M in C} (Y - sum_x h(gamma_x) gamma_{M x})

is formed, where gamma = d * beta are the rescaled (algebraic integer)
roots, so all Gamma_C lie in ZZ[Y] and are recognised by rounding.  The
class of Frobenius at p is the unique C with

    Gamma_C( Tr(h(a) a^p) ) == 0 (mod p)     in F_p[Y]/G(Y),

and the remaining scalar ambiguity is resolved through the determinant,
which is known: det rho(Frob_p) = eps(p) p^(k-1) mod ell.  Squaring is
a bijection on the odd-order S, so the lift is unique and gives
a_p mod ell as s * tr(C).

The left-vs-right convention for the action on labels is calibrated
once against exact coefficients at a few small primes and then frozen.
"""

import gmpy2
from gmpy2 import mpc, mpfr

from . import targets
from .evaluation import product_poly, recognise_poly
from .numeric import (BadPrimeError, PrecisionError, mag, workprec)


def subgroup_S(ell):
    """The odd-order part of F_ell^*."""
    n = ell - 1
    while n % 2 == 0:
        n //= 2
    # elements of order dividing n: the image of x -> x^((ell-1)/n)
    e = (ell - 1) // n
    return sorted({pow(x, e, ell) for x in range(1, ell)})


def orbit_label(x, S, ell):
    a, b = x
    return min(((s * a) % ell, (s * b) % ell) for s in S)


def plane_orbit_reps(ell):
    S = subgroup_S(ell)
    reps = set()
    for a in range(ell):
        for b in range(ell):
            if a == 0 and b == 0:
                continue
            reps.add(orbit_label((a, b), S, ell))
    return sorted(reps)


def quotient_poly(alphas, ell, prec):
    """(Ftilde, labels, betas): the S-orbit trace polynomial over QQ.

    alphas: dict (a, b) -> complex alpha value.  betas keeps the complex
    orbit sums in label order, for later root refinement.
    """
    S = subgroup_S(ell)
    reps = plane_orbit_reps(ell)
    with workprec(prec + 64):
        betas = []
        for (a, b) in reps:
            acc = mpc(0)
            for s in S:
                acc += alphas[((s * a) % ell, (s * b) % ell)]
            betas.append(acc)
        poly = product_poly(betas)
        fr = recognise_poly(poly, prec)
    return fr, reps, betas


def _lcm(a, b):
    return a * b // gmpy2.gcd(a, b)


def integral_model(ftilde):
    """(G, d): G(Y) = d^n Ftilde(Y/d) monic in ZZ[Y], gamma = d beta."""
    n = len(ftilde) - 1
    assert ftilde[n] == 1
    d = 1
    for c in ftilde:
        d = _lcm(d, c.denominator)
    G = []
    for k, c in enumerate(ftilde):
        v = c * d ** (n - k)
        assert v.denominator == 1
        G.append(int(v))
    return G, d


def refine_roots(G, approx, prec):
    """Newton-refine complex roots of the integer polynomial G."""
    n = len(G) - 1
    dG = [k * G[k] for k in range(1, n + 1)]
    out = []
    with workprec(prec + 64):
        for z0 in approx:
            z = mpc(z0)
            for _ in range(200):
                f = _horner(G, z)
                df = _horner(dG, z)
                step = f / df
                z = z - step
                if mag(step) <= mpfr(2) ** (-prec) * (1 + mag(z)):
                    break
            out.append(z)
        # the refined roots must stay distinct
        for i in range(n):
            for j in range(i + 1, n):
                if mag(out[i] - out[j]) < mpfr(2) ** (-64):
                    raise PrecisionError("refined roots collided")
    return out


def _horner(coeffs, z):
    acc = mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


# ---------------------------------------------------------------------------
# the group GL_2(F_ell)/S and its conjugacy classes


def gbar_classes(ell):
    """Conjugacy classes of GL_2(F_ell)/S.

    Returns a dict class_key -> list of coset representatives, where
    class_key = (tr, det, scalar_flag) canonicalised under s-scaling.
    Each S-coset {sM} appears exactly once in exactly one class.
    """
    S = subgroup_S(ell)

    def coset_rep(m):
        a, b, c, d = m
        return min(((s * a) % ell, (s * b) % ell,
                    (s * c) % ell, (s * d) % ell) for s in S)

    def class_key(m):
        a, b, c, d = m
        tr = (a + d) % ell
        det = (a * d - b * c) % ell
        scalar = (b == 0 and c == 0 and a == d)
        return min((((s * tr) % ell, (s * s * det) % ell, scalar)
                    for s in S))

    classes = {}
    seen = set()
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                for d in range(ell):
                    if (a * d - b * c) % ell == 0:
                        continue
                    m = coset_rep((a, b, c, d))
                    if m in seen:
                        continue
                    seen.add(m)
                    classes.setdefault(class_key(m), []).append(m)
    return classes


def _mat_inv(m, ell):
    a, b, c, d = m
    det = (a * d - b * c) % ell
    di = pow(det, ell - 2, ell)
    return ((d * di) % ell, (-b * di) % ell,
            (-c * di) % ell, (a * di) % ell)


class FrobeniusEngine:
    """Resolvent data for one (form, ell) pair, ready to classify primes."""

    H_CHOICES = ((0, 0, 1), (0, 1, 0, 1))    # X^2 and X^3 + X

    def __init__(self, form, ell, ftilde, labels, betas, base_prec,
                 orientation=None):
        self.form = form
        self.ell = ell
        self.k = targets.WEIGHTS[form]
        self.labels = list(labels)
        self.S = subgroup_S(ell)
        self.G, self.d = integral_model(ftilde)
        self.n = len(self.G) - 1
        self.base_prec = base_prec
        self._betas0 = list(betas)
        self.classes = gbar_classes(ell)
        self._label_pos = {lab: i for i, lab in enumerate(self.labels)}
        if orientation is None:
            orientation = self._calibrate()
        self.orientation = orientation
        self.resolvents = {h: self._build_resolvents(h, orientation)
                           for h in self.H_CHOICES}

    @classmethod
    def from_artifact(cls, form, ell, G, d, orientation, resolvents):
        """Rebuild a classification-only engine from stored resolvents."""
        self = object.__new__(cls)
        self.form = form
        self.ell = ell
        self.k = targets.WEIGHTS[form]
        self.labels = plane_orbit_reps(ell)
        self.S = subgroup_S(ell)
        self.G = list(G)
        self.d = d
        self.n = len(G) - 1
        self.base_prec = None
        self._betas0 = None
        self.classes = gbar_classes(ell)
        self._label_pos = {lab: i for i, lab in enumerate(self.labels)}
        self.orientation = orientation
        self.resolvents = resolvents
        return self

    # -- resolvent construction ------------------------------------------------

    def _perm(self, m, orientation):
        ell = self.ell
        if orientation:
            m = _mat_inv(m, ell)
        a, b, c, d = m
        out = []
        for (x, y) in self.labels:
            xx = (a * x + b * y) % ell
            yy = (c * x + d * y) % ell
            out.append(self._label_pos[orbit_label((xx, yy), self.S, ell)])
        return out

    def _resolvent_prec(self, h):
        # per factor |r| <= n * max|h(gamma)| * max|gamma|, and the
        # product over a class of size |C| multiplies the bit sizes
        maxc = max(len(v) for v in self.classes.values())
        maxb = max(float(abs(mpc(b))) for b in self._betas0)
        import math
        gbits = max(math.log2(int(self.d)) + math.log2(max(maxb, 1.0)), 4)
        degh = len(h) - 1
        per = (degh + 1) * (gbits + 2) + math.log2(self.n) + 8
        return int(maxc * per) + 256

    def _build_resolvents(self, h, orientation):
        prec = self._resolvent_prec(h)
        gam = refine_roots(self.G, [self.d * b for b in self._betas0], prec)
        with workprec(prec + 64):
            hg = [_horner(list(map(mpc, h)), z) for z in gam]
            out = {}
            for key, mats in self.classes.items():
                rs = []
                for m in mats:
                    perm = self._perm(m, orientation)
                    rs.append(sum((hg[i] * gam[perm[i]]
                                   for i in range(self.n)), mpc(0)))
                poly = product_poly(rs)
                ints = []
                for c in poly:
                    re = gmpy2.rint(c.real)
                    if abs(c.real - re) > 0.01 or mag(c.imag) > 0.01:
                        raise PrecisionError(
                            "resolvent coefficient did not round "
                            "(err %s)" % mag(c.real - re))
                    ints.append(int(re))
                out[key] = ints
        return out

    # -- classification of a prime ----------------------------------------------

    def _check_prime(self, p):
        if p == self.ell:
            raise BadPrimeError("p equal to the residue characteristic")
        if self.d % p == 0:
            raise BadPrimeError("p divides the denominator of the "
                                "quotient polynomial")
        Gp = [c % p for c in self.G]
        if _poly_gcd_deg(Gp, _poly_deriv(Gp, p), p) != 0:
            raise BadPrimeError("quotient polynomial not squarefree mod p")

    def trace_argument(self, p, h):
        """Tr(h(a) a^p) in F_p[Y]/G, as an element of F_p."""
        # gmpy2 integers make the thousands of squarings noticeably faster
        # for primes in the 10^1000 range
        p = gmpy2.mpz(p)
        Gp = [gmpy2.mpz(c) % p for c in self.G]
        apow = _powmod_x(p, Gp, p)
        # h(a) is the coefficient vector of h itself (deg h < n), and it
        # must NOT be evaluated at a^p: h(a^p) a^p = phi(h(a) a) has the
        # same trace as h(a) a, which would make the test vacuous
        hv = ([c % p for c in h] + [0] * self.n)[:self.n]
        val = _polymulmod(hv, apow, Gp, p)
        pows = _newton_power_sums(Gp, p, self.n)
        return sum(c * pows[i] for i, c in enumerate(val)) % p

    def frobenius_class(self, p):
        """The Gbar-conjugacy class key of Frobenius at p."""
        self._check_prime(p)
        ambiguous = None
        for h in self.H_CHOICES:
            t = self.trace_argument(p, h)
            zeros = [key for key, poly in self.resolvents[h].items()
                     if _poly_eval_mod(poly, t, p) == 0]
            if len(zeros) == 1:
                return zeros[0]
            ambiguous = zeros
        raise BadPrimeError("resolvent test was ambiguous at p "
                            "(%d candidates)" % len(ambiguous))

    def ap(self, p):
        """a_p mod ell via the determinant lift of the Frobenius class."""
        key = self.frobenius_class(p)
        return self.ap_from_class(key, p)

    def ap_from_class(self, key, p):
        ell = self.ell
        tr, det, _ = key
        target = pow(p % ell, self.k - 1, ell)   # trivial nebentypus forms
        for s in self.S:
            if (det * s * s) % ell == target:
                return (tr * s) % ell
        raise BadPrimeError("determinant lift failed")

    def factor_pattern(self, p):
        """Degrees of the irreducible factors of G mod p (sorted)."""
        self._check_prime(p)
        return sorted(_ddf_degrees([c % p for c in self.G], p))

    def predicted_pattern(self, key):
        """Cycle type of the class acting on the labels."""
        m = self.classes[key][0]
        perm = self._perm(m, self.orientation)
        seen = [False] * self.n
        out = []
        for i in range(self.n):
            if seen[i]:
                continue
            c, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                c += 1
            out.append(c)
        return sorted(out)

    # -- orientation calibration --------------------------------------------------

    def _calibrate(self, nprimes=6):
        # very small primes are skipped: resolvent values collide mod p
        an = targets.newform_coeffs(self.form, 500)
        prim = [p for p in range(40, 500)
                if gmpy2.is_prime(p) and p != self.ell]
        for orientation in (0, 1):
            self.resolvents = {h: self._build_resolvents(h, orientation)
                               for h in self.H_CHOICES}
            self.orientation = orientation
            ok = 0
            good = True
            for p in prim:
                try:
                    got = self.ap(p)
                except BadPrimeError:
                    continue
                if got != an[p] % self.ell:
                    good = False
                    break
                ok += 1
                if ok >= nprimes:
                    break
            if good and ok >= nprimes:
                return orientation
        raise PrecisionError("neither orientation matched the exact "
                             "coefficients; data is inconsistent")


# ---------------------------------------------------------------------------
# dense polynomial arithmetic mod (G, p)


def _polymulmod(a, b, G, p):
    n = len(G) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # reduce by monic G
    for i in range(len(out) - 1, n - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for k in range(n):
                out[i - n + k] = (out[i - n + k] - c * G[k]) % p
    return out[:n]


def _powmod_x(e, G, p):
    n = len(G) - 1
    result = [1] + [0] * (n - 1)
    base = ([0, 1] + [0] * (n - 2))[:n]
    if n == 1:
        base = [(-G[0]) % p]
    while e > 0:
        if e & 1:
            result = _polymulmod(result, base, G, p)
        e >>= 1
        if e:
            base = _polymulmod(base, base, G, p)
    return result


def _newton_power_sums(G, p, count):
    """Tr(a^k) for k = 0..count-1 in F_p[Y]/G (G monic)."""
    n = len(G) - 1
    e = [G[n - i] % p for i in range(n + 1)]  # e[i] = coeff of Y^(n-i)
    pows = [n % p]
    for k in range(1, count):
        acc = (-k * e[k]) % p if k <= n else 0
        for i in range(1, min(k - 1, n) + 1):
            acc = (acc - e[i] * pows[k - i]) % p
        pows.append(acc % p)
    return pows


def _poly_deriv(a, p):
    return [(i * c) % p for i, c in enumerate(a)][1:]


def _poly_gcd_deg(a, b, p):
    a = _trim(a)
    b = _trim(b)
    while b:
        a, b = b, _trim(_poly_rem(a, b, p))
    return len(a) - 1


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a, b, p):
    a = [x % p for x in a]
    inv = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        c = (a[-1] * inv) % p
        if c:
            for k in range(db + 1):
                a[len(a) - 1 - db + k] = (a[len(a) - 1 - db + k]
                                          - c * b[k]) % p
        a.pop()
    return a


def _ddf_degrees(G, p):
    """Multiset of irreducible factor degrees of squarefree G mod p."""
    out = []
    f = _trim([c % p for c in G])
    # make monic
    inv = pow(f[-1], p - 2, p)
    f = [(c * inv) % p for c in f]
    x = [0, 1]
    xp = x[:]
    d = 0
    while len(f) - 1 > 0:
        d += 1
        if 2 * d > len(f) - 1:
            out.append(len(f) - 1)
            break
        xp = _powmod_poly(xp, p, f, p)
        g = _gcd_poly(_sub_poly(xp, x, p), f, p)
        if len(g) - 1 > 0:
            out.extend([d] * ((len(g) - 1) // d))
            f = _poly_div_exact(f, g, p)
            xp = _poly_rem(xp, f, p) or [0]
    return out


def _powmod_poly(a, e, G, p):
    result = [1]
    base = _poly_rem(a, G, p) or [0]
    while e > 0:
        if e & 1:
            result = _poly_rem(_mul_poly(result, base, p), G, p) or [0]
        e >>= 1
        if e:
            base = _poly_rem(_mul_poly(base, base, p), G, p) or [0]
    return result


def _mul_poly(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _sub_poly(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _gcd_poly(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _trim(_poly_rem(a, b, p))
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _poly_div_exact(a, b, p):
    out = []
    a = [x % p for x in a]
    inv = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db:
        c = (a[-1] * inv) % p
        out.append(c)
        for k in range(db + 1):
            a[len(a) - 1 - db + k] = (a[len(a) - 1 - db + k] - c * b[k]) % p
        a.pop()
    out.reverse()
    return _trim(out) or [0]


def _poly_eval_mod(poly, t, p):
    acc = 0
    for c in reversed(poly):
        acc = (acc * t + c) % p
    return acc
