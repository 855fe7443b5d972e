"""Arbitrary-precision numeric plumbing.

Everything downstream (period lattices, jacobian linear algebra, root
refinement) runs on gmpy2 mpfr/mpc numbers.  Precision is always passed
around explicitly as a bit count; the helpers here install it in a local
gmpy2 context so that no global state leaks between pipeline stages.
"""

from contextlib import contextmanager
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpc


class RankUnstableError(Exception):
    """Numerical rank could not be decided at the working tolerance."""


class RecognitionError(Exception):
    """A float did not reconstruct to a rational (precision too low)."""


class PrecisionError(Exception):
    """Generic 'raise the working precision and retry' failure."""


class ConfigExcludedError(Exception):
    """The (form, ell) pair is outside the range of the construction."""


class BadPrimeError(Exception):
    """Frobenius data was requested at a prime the method cannot handle."""


@contextmanager
def workprec(bits):
    """Run a block with gmpy2 precision set to `bits` (real and imaginary)."""
    saved = gmpy2.get_context()
    ctx = gmpy2.context()
    ctx.precision = int(bits)
    gmpy2.set_context(ctx)
    try:
        yield
    finally:
        gmpy2.set_context(saved)


def to_mpc(x, y=0):
    return mpc(mpfr(x), mpfr(y))


def default_tol(prec):
    # one third of the working precision, see the rank discussion in the
    # module docstring of jacobian.py
    return mpfr(2) ** (-(int(prec) // 3))


def mag(z):
    """Cheap magnitude of an mpfr or mpc (max of |re|, |im|)."""
    if isinstance(z, mpc):
        return max(abs(z.real), abs(z.imag))
    return abs(z)


class SubspaceBasis:
    """Row-span of a complex matrix, kept in a pivot-normalised echelon form.

    vectors: list of rows (lists of mpc), each row scaled so its pivot
    entry is exactly 1 and pivot columns are cleared in the other rows.
    This makes equal subspaces produce (nearly) identical matrices, which
    the tests rely on.
    """

    def __init__(self, vectors, ambient_dim, tol):
        self.vectors = vectors
        self.ambient_dim = ambient_dim
        self.tol = tol

    @property
    def dim(self):
        return len(self.vectors)

    def matrix(self):
        return [row[:] for row in self.vectors]


def _echelonize(rows, ncols, tol):
    """In-place Gauss-Jordan with partial pivoting; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        # choose pivot row
        best, besti = None, None
        for i in range(r, len(rows)):
            m = mag(rows[i][c])
            if best is None or m > best:
                best, besti = m, i
        if best is None or best <= tol:
            continue
        rows[r], rows[besti] = rows[besti], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if mag(f) != 0:
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots, r


def row_space(mat, tol):
    """Echelonized basis of the row space of `mat` at tolerance `tol`."""
    if not mat:
        return SubspaceBasis([], 0, tol)
    rows = [[mpc(x) for x in row] for row in mat]
    ncols = len(rows[0])
    pivots, r = _echelonize(rows, ncols, tol)
    return SubspaceBasis(rows[:r], ncols, tol)


def kernel_and_reduce(mat, tol, check_stability=True):
    """Echelonized basis of the right kernel of `mat` at tolerance `tol`.

    Raises RankUnstableError when some pivot candidate falls within one
    decade of `tol` on either side, since then the rank (and so every
    Riemann-Roch dimension count downstream) is not trustworthy.
    """
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    if ncols == 0:
        return SubspaceBasis([], 0, tol)
    rows = [[mpc(x) for x in row] for row in mat]

    # Gaussian elimination with column bookkeeping
    pivots = []
    pivot_mags = []
    r = 0
    for c in range(ncols):
        best, besti = mpfr(0), None
        for i in range(r, nrows):
            m = mag(rows[i][c])
            if m > best:
                best, besti = m, i
        pivot_mags.append(best)
        if besti is None or best <= tol:
            continue
        rows[r], rows[besti] = rows[besti], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if mag(f) != 0:
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break

    if check_stability:
        lo, hi = tol / 10, tol * 10
        for m in pivot_mags:
            if lo < m < hi:
                raise RankUnstableError(
                    "pivot magnitude %s within a decade of tol %s" % (m, tol))

    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [mpc(0)] * ncols
        v[fc] = mpc(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    ker = SubspaceBasis(basis, ncols, tol)
    # normalise for determinism
    rows2 = [row[:] for row in ker.vectors]
    _echelonize(rows2, ncols, tol)
    ker.vectors = rows2[:len(basis)]
    return ker


def mat_mul_vec(mat, vec):
    return [sum((a * b for a, b in zip(row, vec)), mpc(0)) for row in mat]


def solve_complex(mat, rhs, tol):
    """Solve a square (or overdetermined, consistent) complex system."""
    n = len(mat[0])
    aug = [list(row) + [r] for row, r in zip(mat, rhs)]
    pivots, rank = _echelonize(aug, n, tol)
    if rank < n:
        raise RankUnstableError("system is singular at tolerance")
    sol = [mpc(0)] * n
    for i, c in enumerate(pivots):
        sol[c] = aug[i][n]
    return sol


def mpfr_to_fraction(x):
    n, d = x.as_integer_ratio()
    return Fraction(int(n), int(d))


def rational_reconstruct(x, jump=10**8, denom_hint=None, tol=None):
    """Recognise a real float as a rational via continued fractions.

    Acceptance needs a partial-quotient jump of at least `jump`, or exact
    agreement with `denom_hint` (a known multiple of the denominator).
    `x` may be mpfr or mpc with negligible imaginary part.
    """
    if isinstance(x, mpc):
        if tol is not None and mag(x.imag) > tol:
            raise RecognitionError("imaginary part above tolerance")
        x = x.real
    if tol is None:
        tol = mpfr(2) ** (-(gmpy2.get_context().precision // 2))
    if abs(x) < tol:
        return Fraction(0, 1)

    if denom_hint is not None:
        num = x * denom_hint
        n = int(gmpy2.rint(num))
        if abs(num - n) < mpfr(0.25):
            return Fraction(n, int(denom_hint))

    frac = mpfr_to_fraction(x)
    # continued fraction expansion, stop at a huge term
    terms = []
    v = frac
    for _ in range(10000):
        a = v.numerator // v.denominator
        terms.append(a)
        if len(terms) > 1 and abs(a) >= jump:
            # reconstruct from terms[:-1]
            num, den = 1, 0
            for t in reversed(terms[:-1]):
                num, den = t * num + den, num
            return Fraction(num, den)
        v = v - a
        if v == 0:
            # x terminated exactly; every float is a dyadic rational, so
            # this only counts as recognition when the denominator is
            # far smaller than the working precision allows
            prec = gmpy2.get_context().precision
            if (frac.denominator ** 2 <= jump
                    or 2 * frac.denominator.bit_length() <= prec):
                return frac
            raise RecognitionError("terminating expansion with a large "
                                   "denominator (noise, not a rational)")
        v = 1 / v
    raise RecognitionError("no huge continued-fraction term found")
