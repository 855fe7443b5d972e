"""Exact q-expansions of the target newforms (small index only).

delta is weight 12 level 1, e4delta is weight 16 level 1; both are the
unique normalized cusp forms in their space, so eigenform coefficients
come straight out of the Eisenstein series E4 and E6.
"""

WEIGHTS = {"delta": 12, "e4delta": 16}

# primes where the mod-l representation of the form is known to be small
# (reducible or otherwise degenerate), so the construction does not apply
EXCEPTIONAL = {
    "delta": frozenset({2, 3, 5, 7, 23, 691}),
    "e4delta": frozenset({2, 3, 5, 7, 11, 31, 59, 3617}),
}


def _sigma(n, k):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein_e4(B):
    return [1] + [240 * _sigma(n, 3) for n in range(1, B)]


def eisenstein_e6(B):
    return [1] + [-504 * _sigma(n, 5) for n in range(1, B)]


def _mul(a, b, B):
    out = [0] * B
    for i, x in enumerate(a[:B]):
        if x:
            for j, y in enumerate(b[: B - i]):
                out[i + j] += x * y
    return out


def delta_coeffs(B):
    """tau(n) for n < B, as delta_coeffs(B)[n]; index 0 is 0."""
    e4 = eisenstein_e4(B)
    e6 = eisenstein_e6(B)
    num = [x - y for x, y in zip(_mul(_mul(e4, e4, B), e4, B), _mul(e6, e6, B))]
    assert all(x % 1728 == 0 for x in num)
    return [x // 1728 for x in num]


def e4delta_coeffs(B):
    return _mul(eisenstein_e4(B), delta_coeffs(B), B)


def newform_coeffs(form, B):
    if form == "delta":
        return delta_coeffs(B)
    if form == "e4delta":
        return e4delta_coeffs(B)
    raise ValueError("unknown form %r" % (form,))
