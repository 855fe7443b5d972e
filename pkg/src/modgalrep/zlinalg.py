"""Small exact linear algebra helpers over ZZ and QQ.

Matrices are lists of lists of python ints or Fractions.  Sizes here are
a few hundred at most (Manin symbol presentations), so naive algorithms
are fine.
"""

from fractions import Fraction


def rrefQ(mat):
    """Reduced row echelon form over Fractions.  Returns (rows, pivots)."""
    rows = [[Fraction(x) for x in row] for row in mat]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def kernel_z(mat):
    """Basis of the left kernel lattice {x in ZZ^n : x*mat = 0}.

    mat: n x m integer matrix (list of n rows).  Returns rows spanning
    the kernel as a saturated lattice, via row HNF of the block [mat|I].
    """
    n = len(mat)
    m = len(mat[0]) if n else 0
    rows = [[int(x) for x in mat[i]] + [int(i == j) for j in range(n)]
            for i in range(n)]
    # row-reduce the first m columns over ZZ with Euclidean steps
    r = 0
    for c in range(m):
        while True:
            piv = None
            best = None
            for i in range(r, n):
                if rows[i][c] != 0 and (best is None or abs(rows[i][c]) < best):
                    piv, best = i, abs(rows[i][c])
            if piv is None:
                break
            rows[r], rows[piv] = rows[piv], rows[r]
            done = True
            for i in range(r + 1, n):
                if rows[i][c] != 0:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][c] != 0:
                        done = False
            if done:
                r += 1
                break
    kernel = [row[m:] for row in rows[r:] if not any(row[:m])]
    # sanity: rows below r must have zero left block by construction
    assert len(kernel) == n - r
    return kernel


def solveQ(mat, rhs):
    """Solve mat*x = rhs exactly; mat may be tall (consistent system).

    Returns x as Fractions, or None if inconsistent.
    """
    n = len(mat)
    m = len(mat[0])
    aug = [[Fraction(mat[i][j]) for j in range(m)] + [Fraction(rhs[i])]
           for i in range(n)]
    rows, pivots = rrefQ(aug)
    x = [Fraction(0)] * m
    for row, c in zip(rows, pivots):
        if c == m:
            return None  # pivot in the rhs column: inconsistent
        x[c] = row[m]
    # verify (cheap and catches underdetermined-but-wrong picks)
    for i in range(n):
        if sum(Fraction(mat[i][j]) * x[j] for j in range(m)) != Fraction(rhs[i]):
            return None
    return x


def charpolyQ(mat):
    """Characteristic polynomial det(X*I - mat) by Faddeev-LeVerrier.

    Returns coefficients [c0, c1, ..., cn] with cn = 1.
    """
    n = len(mat)
    A = [[Fraction(x) for x in row] for row in mat]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M = A*M + c_{n-k+1} * I
        if k > 1:
            M = _matmulQ(A, M)
        for i in range(n):
            M[i][i] += coeffs[n - k + 1]
        tr = sum((_matmulQ_row(A, M, i)[i]) for i in range(n))
        coeffs[n - k] = -tr / k
    return coeffs


def _matmulQ(A, B):
    n = len(A)
    m = len(B[0])
    k = len(B)
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def _matmulQ_row(A, B, i):
    n = len(B[0])
    k = len(B)
    return [sum(A[i][t] * B[t][j] for t in range(k)) for j in range(n)]


def poly_mulQ(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_divmodQ(a, b):
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    while b and b[-1] == 0:
        b.pop()
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        f = a[-1] / b[-1]
        q[k] = f
        for i in range(len(b)):
            a[k + i] -= f * b[i]
        a.pop()
    return q, a


def poly_gcdQ(a, b):
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    while any(x != 0 for x in b):
        _, r = poly_divmodQ(a, b)
        while r and r[-1] == 0:
            r.pop()
        a, b = b, r
    while a and a[-1] == 0:
        a.pop()
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def kernel_modp(mat, p):
    """Basis of {x : mat*x = 0 mod p} as a list of int vectors, p prime."""
    rows = [[int(x) % p for x in row] for row in mat]
    m = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(m):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(m) if c not in set(pivots)]
    basis = []
    for c in free:
        v = [0] * m
        v[c] = 1
        for row, pc in zip(rows[:r], pivots):
            v[pc] = (-row[c]) % p
        basis.append(v)
    return basis


def squarefree_partQ(poly):
    d = [i * poly[i] for i in range(1, len(poly))]
    g = poly_gcdQ(poly, d)
    q, r = poly_divmodQ(poly, g)
    assert not any(r)
    return q
