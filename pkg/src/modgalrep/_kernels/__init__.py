"""Hot polynomial-arithmetic kernels with a compiled core when available.

`polymul_mod(a, b, p)` is the only entry point the rest of the package
uses.  At import time we pick the Cython extension if it built, else the
vectorised numpy fallback; `BACKEND` records which one is active.
"""

try:
    from ._polymul_cy import polymul_mod, NTT_PRIMES, BACKEND
except ImportError:  # extension not built on this machine
    from ._polymul_py import polymul_mod, NTT_PRIMES, BACKEND

from . import _polymul_py

__all__ = ["polymul_mod", "NTT_PRIMES", "BACKEND", "_polymul_py"]
