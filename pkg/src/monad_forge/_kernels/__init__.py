"""Row-reduction kernels over prime fields.

The compiled Cython extension is used when it imported cleanly and the
prime fits its 31-bit modulus bound; everything else routes to the pure
Python implementation.  Set MONAD_FORGE_PURE=1 to force pure Python.
"""

from __future__ import annotations

import os

from . import pure as _pure

_COMPILED_P_LIMIT = 1 << 31

if os.environ.get("MONAD_FORGE_PURE"):
    _impl = _pure
else:
    try:
        from . import _fastrank as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND


def _usable(p: int) -> bool:
    return _impl is _pure or p < _COMPILED_P_LIMIT


def rank_mod_p(mat, p: int) -> int:
    if _usable(p):
        return _impl.rank_mod_p(mat, p)
    return _pure.rank_mod_p(mat, p)


def nullity_mod_p(mat, p: int) -> int:
    if _usable(p):
        return _impl.nullity_mod_p(mat, p)
    return _pure.nullity_mod_p(mat, p)


def batch_rank_mod_p(mats, p: int) -> list[int]:
    if _usable(p):
        return list(_impl.batch_rank_mod_p(mats, p))
    return _pure.batch_rank_mod_p(mats, p)
