"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``TRA_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("TRA_PURE_PYTHON") != "1":
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

tridiag_pivots = _impl.tridiag_pivots
three_term_run = _impl.three_term_run
laguerre_table = _impl.laguerre_table
jacobi_table = _impl.jacobi_table
mp_table = _impl.mp_table

__all__ = ["BACKEND", "tridiag_pivots", "three_term_run", "laguerre_table",
           "jacobi_table", "mp_table"]
