"""Selects the quadrature kernel: compiled extension or numpy fallback.

The compiled kernel (`_kernel`, built from `_kernel.pyx`) releases the GIL
inside the adaptive loop, so threaded grid evaluation scales with cores.
Set TAYLORLET_FORCE_FALLBACK=1 to force the pure-Python kernel (used by the
backend benchmark and equivalence tests).
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("TAYLORLET_FORCE_FALLBACK", "") not in ("", "0"):
    _impl = _kernel_py
    BACKEND = "python"
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernel_py
        BACKEND = "python"

term_integral = _impl.term_integral


def fallback_term_integral(*args, **kwargs):
    """Always the pure-Python kernel, regardless of the selected backend."""
    return _kernel_py.term_integral(*args, **kwargs)
