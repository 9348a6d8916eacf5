"""Evaluation of the taylorlet transform on feasible scenes.

For a term w * I_sign^j delta(x1 - q(x2)) the 2-D pairing reduces, by
partial integration in x1, to a one-dimensional integral of an iterated
antiderivative of g against the graph of q:

    T(a, s, t) = w * a^(j-(1+alpha)/2) *
                 int G_j(res(x2)/a) * h((x2-t)/a^alpha) dx2,

where res(x2) = q(x2) - sum_l s_l/l! (x2-t)^l and G_j is I^j g taken with
the integration sign opposite to the term's (a factor (-1)^j for sign +1,
since all intermediate integrals of g vanish).  The x2 window is truncated
where the Gaussian h drops below the configured epsilon.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError, DomainClipWarning, InvalidCase, OrderTooHigh, QuadratureFailure
from .quadrature import QuadratureConfig
from .scene import FeasibleScene, SingularityCurve
from .taylorlet import TaylorletSpec, iterated_antiderivative

__all__ = [
    "TransformQuery",
    "shear_residual",
    "highest_approximation_order",
    "predicted_decay_exponent",
    "taylorlet_transform",
    "dense_trapezoid_transform",
    "build_plans",
    "cell_value",
]


@dataclass(frozen=True)
class TransformQuery:
    """One evaluation point of the transform: scale, shear vector, position."""

    a: float
    s: tuple[float, ...]
    t: float
    alpha: float
    n: int

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("scale a must be positive")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if len(self.s) != self.n + 1:
            raise ValueError(f"shear vector needs n+1 = {self.n + 1} entries")
        object.__setattr__(self, "s", tuple(float(v) for v in self.s))


def shear_residual(curve: SingularityCurve, s, t: float, x2: float) -> float:
    """q(x2) minus the shear polynomial sum_l s_l/l! (x2 - t)^l."""
    q = curve.value(x2)  # raises DomainError outside the curve domain
    acc = 0.0
    dx = x2 - t
    for ell in range(len(s) - 1, -1, -1):
        acc = acc * dx + s[ell] / math.factorial(ell)
    return q - acc


def highest_approximation_order(curve: SingularityCurve, s, t: float, n: int,
                                tol: float = 1e-12) -> int:
    """Largest k <= n with s_l = q^(l)(t) for all l <= k; -1 if s_0 is off."""
    k = -1
    for ell in range(min(n, len(s) - 1) + 1):
        if abs(s[ell] - curve.derivative(t, ell)) > tol:
            break
        k = ell
    return k


def predicted_decay_exponent(j: int, r: int, alpha: float, k: int, n: int) -> float:
    """Decay exponent of the transform by highest approximation order k.

    k = -1 means the position is wrong and the decay is superpolynomial
    (returns +inf).  For k < n the guaranteed exponent is
    j + (alpha-1)/2 + (r-j)(1-(k+1) alpha) and requires alpha < 1/n; for
    k = n it is j + (alpha-1)/2 and requires alpha > 1/(n+1).  The exact
    boundary values of alpha are not covered by any case and are rejected.
    """
    if j >= r:
        raise ValueError("requires j < r")
    if not -1 <= k <= n:
        raise ValueError("k must lie in {-1, ..., n}")
    if k == -1:
        return math.inf
    if k == n:
        if alpha <= 1.0 / (n + 1):
            raise InvalidCase(f"slow-decay case requires alpha > 1/(n+1) = {1/(n+1):.6g}")
        return j + (alpha - 1.0) / 2.0
    if alpha >= 1.0 / n:
        raise InvalidCase(f"fast-decay case requires alpha < 1/n = {1/n:.6g}")
    return j + (alpha - 1.0) / 2.0 + (r - j) * (1.0 - (k + 1) * alpha)


def _require_unit_gaussian_h(spec: TaylorletSpec):
    # The quadrature kernels and the window truncation assume h = exp(-t^2).
    if spec.h.weight_power != 2 or spec.h.coeffs != {0: 1}:
        raise NotImplementedError(
            "transform evaluation supports the unit-Gaussian window h only")


def build_plans(scene: FeasibleScene, spec: TaylorletSpec):
    """Precompute per-term float data consumed by the quadrature kernels."""
    _require_unit_gaussian_h(spec)
    plans = []
    for term in scene.terms:
        if term.j >= spec.moments_r:
            raise OrderTooHigh(
                f"term smoothness j={term.j} needs more vanishing moments than "
                f"the taylorlet provides ({spec.moments_r})"
            )
        gj = iterated_antiderivative(spec, term.j)
        # I_-^j g = (-1)^j I_+^j g here; a term built from I_+^j delta pairs
        # with I_-^j g, and vice versa.
        parity = (-1.0) ** term.j if term.sign == 1 else 1.0
        kind, params = term.curve.kernel_encoding()
        plans.append((
            np.asarray(gj.float_coeffs(), dtype=float),
            kind,
            np.asarray(params, dtype=float),
            term.weight * parity,
            term.j,
            term.curve.domain(),
        ))
    return plans


def _window(t: float, a: float, alpha: float, domain, eps: float, clip_domain: bool):
    half = math.sqrt(math.log(1.0 / eps)) * a ** alpha
    lo, hi = t - half, t + half
    dlo, dhi = domain
    if lo < dlo or hi > dhi:
        if not clip_domain:
            raise DomainError(
                f"integration window [{lo:.6g}, {hi:.6g}] exceeds curve domain "
                f"({dlo:.6g}, {dhi:.6g})"
            )
        warnings.warn(
            "integration window clipped to the curve domain; decay slopes at "
            "coarse scales may be biased",
            DomainClipWarning,
            stacklevel=3,
        )
        lo, hi = max(lo, dlo), min(hi, dhi)
    return lo, hi


def cell_value(plans, a: float, alpha: float, t: float, s,
               cfg: QuadratureConfig, clip_domain: bool = True) -> float:
    """Transform value at one (a, s, t) point from precomputed term plans."""
    sfact = np.array([s[ell] / math.factorial(ell) for ell in range(len(s))], dtype=float)
    inv_a_alpha = a ** (-alpha)
    total = 0.0
    for coeffs, kind, params, weight, j, domain in plans:
        lo, hi = _window(t, a, alpha, domain, cfg.window_eps, clip_domain)
        if hi <= lo:
            continue
        value, err, ok = _backend.term_integral(
            coeffs, kind, params, a, inv_a_alpha, t, sfact, lo, hi,
            cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions,
        )
        if not ok:
            raise QuadratureFailure(
                f"transform quadrature did not converge at a={a:.6g}, s={tuple(s)}",
                value=value, err_estimate=err,
            )
        total += weight * a ** (j - (1.0 + alpha) / 2.0) * value
    return total


def taylorlet_transform(scene: FeasibleScene, spec: TaylorletSpec,
                        query: TransformQuery, cfg: QuadratureConfig | None = None,
                        clip_domain: bool = True) -> float:
    """Evaluate the transform of a feasible scene at one query point."""
    cfg = cfg or QuadratureConfig()
    plans = build_plans(scene, spec)
    return cell_value(plans, query.a, query.alpha, query.t, query.s, cfg, clip_domain)


def dense_trapezoid_transform(scene: FeasibleScene, spec: TaylorletSpec,
                              query: TransformQuery, cfg: QuadratureConfig | None = None,
                              steps_per_window: int = 2000) -> float:
    """Reference evaluation on a uniform grid of step a^alpha/steps_per_window.

    Deliberately independent of the adaptive Gauss-Kronrod path; used as a
    cross-check oracle.
    """
    _require_unit_gaussian_h(spec)
    cfg = cfg or QuadratureConfig()
    a, alpha, t, s = query.a, query.alpha, query.t, query.s
    step = a ** alpha / steps_per_window
    total = 0.0
    for term in scene.terms:
        gj = iterated_antiderivative(spec, term.j)
        parity = (-1.0) ** term.j if term.sign == 1 else 1.0
        coeffs = np.asarray(gj.float_coeffs())
        lo, hi = _window(t, a, alpha, term.curve.domain(), cfg.window_eps, True)
        if hi <= lo:
            continue
        npts = max(int(math.ceil((hi - lo) / step)) + 1, 9)
        x = np.linspace(lo, hi, npts)
        # Keep endpoints strictly inside open curve domains.
        x[0] = np.nextafter(x[0], x[-1])
        x[-1] = np.nextafter(x[-1], x[0])
        res = np.array([term.curve.value(float(v)) for v in x])
        dx = x - t
        acc = np.zeros_like(x)
        for ell in range(len(s) - 1, -1, -1):
            acc = acc * dx + s[ell] / math.factorial(ell)
        res -= acc
        u = res / a
        w = u * u
        gpart = np.zeros_like(u)
        mask = w <= 745.0
        if mask.any():
            um = u[mask]
            pv = np.zeros_like(um)
            for c in coeffs[::-1]:
                pv = pv * um + c
            gpart[mask] = pv * np.exp(-w[mask])
        hpart = np.exp(-((dx * a ** (-alpha)) ** 2))
        integrand = gpart * hpart
        total += (term.weight * parity * a ** (term.j - (1.0 + alpha) / 2.0)
                  * np.trapezoid(integrand, x))
    return total
