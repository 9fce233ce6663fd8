"""Kernel dispatch: the compiled extension when it was built, else the pure-Python fallback.

Set ``IDEMFACTOR_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and by the equivalence tests).
"""

import os

from . import _pykernels

_U64 = 1 << 64
# keep target + alpha*v*v and (u+1)**2 well inside a signed 64-bit word
_I64_SAFE = 1 << 61

try:
    if os.environ.get("IDEMFACTOR_PURE_PYTHON"):
        raise ImportError("pure Python forced")
    from . import _ckernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def is_probable_prime(n):
    if _compiled is not None and 0 <= n < _U64:
        return _compiled.miller_rabin_u64(n)
    return _pykernels.miller_rabin(n)


def norm_form_scan(alpha, target, vmax):
    """Solutions (u, v), u >= 0, 0 <= v <= vmax, of u^2 - alpha v^2 = target."""
    if vmax < 0:
        return []
    if _compiled is not None and alpha * vmax * vmax + abs(target) < _I64_SAFE:
        return _compiled.norm_form_scan(alpha, target, vmax)
    return _pykernels.norm_form_scan(alpha, target, vmax)
