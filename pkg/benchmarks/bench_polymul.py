"""Benchmark the compiled NTT polynomial-multiply kernel against the
pure numpy fallback.

Run as: python benchmarks/bench_polymul.py [max_log2]
"""

import sys
import time

import numpy as np

from modgalrep._kernels import BACKEND, polymul_mod
from modgalrep._kernels import _polymul_py


def bench(fn, a, b, p, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(a, b, p)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    max_log2 = int(sys.argv[1]) if len(sys.argv) > 1 else 18
    p = 2013265921
    rng = np.random.default_rng(1)
    print("active backend:", BACKEND)
    print("%8s %12s %12s %8s" % ("n", BACKEND, "numpy", "speedup"))
    for lg in range(10, max_log2 + 1, 2):
        n = 1 << lg
        a = rng.integers(0, p, n)
        b = rng.integers(0, p, n)
        ref = _polymul_py.polymul_mod(a, b, p)
        got = polymul_mod(a, b, p)
        assert np.array_equal(ref, got), "backends disagree at n=%d" % n
        t_active = bench(polymul_mod, a, b, p)
        t_py = bench(_polymul_py.polymul_mod, a, b, p)
        print("%8d %12.4f %12.4f %8.2fx" % (n, t_active, t_py,
                                            t_py / t_active))


if __name__ == "__main__":
    main()
