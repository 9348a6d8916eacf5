"""Pure-Python (numpy) quadrature kernel for the transform integrand.

Mirrors the compiled extension in `_kernel.pyx`: same integrand, same
generation-based adaptive Gauss-Kronrod driver from `quadrature`.  Selected
at import time when the extension is unavailable (or forced via
TAYLORLET_FORCE_FALLBACK=1).
"""

from __future__ import annotations

import numpy as np

from .quadrature import INITIAL_SUBDIVISIONS, QuadratureConfig, adaptive_gk
from .scene import KIND_CIRCLE, KIND_COSINE, KIND_POLYNOMIAL

BACKEND_NAME = "python"


def _curve_values(kind: int, params, x: np.ndarray) -> np.ndarray:
    if kind == KIND_POLYNOMIAL:
        q = np.zeros_like(x)
        for c in params[::-1]:
            q = q * x + c
        return q
    if kind == KIND_CIRCLE:
        radius, branch = params[0], params[1]
        return branch * np.sqrt(np.maximum(radius * radius - x * x, 0.0))
    if kind == KIND_COSINE:
        amp, freq, phase = params[0], params[1], params[2]
        return amp * np.cos(freq * x + phase)
    raise ValueError(f"unknown curve kind {kind}")


def term_integral(g_coeffs, kind, params, a, inv_a_alpha, t, sfact, lo, hi,
                  rel_tol, abs_tol, max_subdivisions):
    """Integrate G((q(x)-shear(x))/a) * exp(-((x-t)/a^alpha)^2) over [lo, hi]."""
    g_coeffs = np.asarray(g_coeffs, dtype=float)
    params = np.asarray(params, dtype=float)
    sfact = np.asarray(sfact, dtype=float)
    inv_a = 1.0 / a

    def fvec(x):
        dx = x - t
        res = _curve_values(kind, params, x)
        shear = np.zeros_like(x)
        for c in sfact[::-1]:
            shear = shear * dx + c
        u = (res - shear) * inv_a
        w = u * u
        out = np.zeros_like(x)
        mask = w <= 745.0
        if mask.any():
            um = u[mask]
            pv = np.zeros_like(um)
            for c in g_coeffs[::-1]:
                pv = pv * um + c
            v = dx[mask] * inv_a_alpha
            out[mask] = pv * np.exp(-w[mask] - v * v)
        return out

    cfg = QuadratureConfig(rel_tol=rel_tol, abs_tol=abs_tol,
                           max_subdivisions=max_subdivisions)
    value, err, ok = adaptive_gk(fvec, lo, hi, cfg, INITIAL_SUBDIVISIONS)
    return value, err, ok
