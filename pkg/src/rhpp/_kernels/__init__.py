"""Hot enumeration kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module is selected at import.  Both expose the same functions.  The public
wrappers route inputs whose intermediate values could exceed 63 bits to the
pure-Python path, which uses arbitrary-precision integers.
"""
from math import prod

from . import _pure

try:
    from . import _ckernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_LIMIT = 1 << 62


def _impl(force):
    if force == "python" or _compiled is None:
        return _pure
    return _compiled


def _max_product(l, total):
    # largest product of l integers >= 2 with the given sum bounds every chain determinant
    base, extra = divmod(total, l)
    return (base + 1) ** extra * base ** (l - extra)


def scan_budget(l, total, lo, hi, backend=None):
    impl = _impl(backend)
    if impl is not _pure and (l > 64 or _max_product(l, total) >= _LIMIT):
        impl = _pure
    return impl.scan_budget(l, total, lo, hi)


def eps3_chain(entries, backend=None):
    entries = tuple(entries)
    impl = _impl(backend)
    if impl is not _pure and prod(entries) >= _LIMIT:
        impl = _pure
    return impl.eps3_chain(entries)


__all__ = ["BACKEND", "scan_budget", "eps3_chain"]
