"""Numba acceleration switch.

Hot kernels (Gibbs sweeps, the assignment solver) exist in two variants: a
numba ``@njit`` scalar-loop version and a vectorized pure-numpy version.
Both compute bit-identical results; the numba path is orders of magnitude
faster for the Gibbs sweeps.

The env var ``TOPICCOV_NUMBA`` selects the path: unset or truthy uses numba
when importable, ``0``/``false``/``off``/``no`` forces the numpy fallback.
``benchmarks/bench_kernels.py`` compares the two paths head to head.
"""

from __future__ import annotations

import os

_OFF_VALUES = ("0", "false", "off", "no")


def _env_allows_numba() -> bool:
    return os.environ.get("TOPICCOV_NUMBA", "1").strip().lower() not in _OFF_VALUES


NUMBA_AVAILABLE = False
njit = None
if _env_allows_numba():
    try:
        from numba import njit  # noqa: F401

        NUMBA_AVAILABLE = True
    except ImportError:
        pass

# Runtime switch, monkeypatchable in tests. Kernels consult use_numba() at
# call time, so flipping this after import is safe.
NUMBA_ENABLED = NUMBA_AVAILABLE


def use_numba() -> bool:
    return NUMBA_ENABLED and NUMBA_AVAILABLE


def compile_kernel(py_func):
    """Return the njit-compiled variant of py_func, or None without numba."""
    if not NUMBA_AVAILABLE:
        return None
    return njit(cache=True, nogil=True)(py_func)
