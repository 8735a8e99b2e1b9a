"""Kernel dispatch: compiled extension when importable, else pure Python.

Set ``SGGALOIS_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("SGGALOIS_PURE"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _pykernels

# small inputs are faster in pure Python (no array conversion)
_SMALL_ROWS = 256


def rref_rows(rows, ncols):
    if len(rows) < _SMALL_ROWS or ncols > 64 * 4096:
        return _pykernels.rref_rows(rows, ncols)
    return _impl.rref_rows(rows, ncols)


def rank_rows(rows, ncols):
    if len(rows) < _SMALL_ROWS:
        return _pykernels.rank_rows(rows, ncols)
    return _impl.rank_rows(rows, ncols)


def gal_mul_many(gs, hs, n, vrows, vpivots):
    if BACKEND == "cython" and n <= 9:
        return _impl.gal_mul_many(gs, hs, n, vrows, vpivots)
    return _pykernels.gal_mul_many(gs, hs, n, vrows, vpivots)
