"""Construction and verification of restrictive analyzing taylorlets.

The construction runs entirely in exact rational arithmetic: starting from
exp(-t^2), substitute t^(v_n), differentiate 2*r*v_n times with the factorial
normalization, substitute back |t|^(1/v_n), and multiply by (1 + t).  The
resulting g has 2r-1 vanishing moments of order n, and together with the
Gaussian h it forms a restrictive taylorlet.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import OrderTooHigh, ResourceLimit, SceneFormatError
from .gausspoly import (
    GaussExpPoly,
    antiderivative,
    apply_one_plus_t,
    differentiate,
    power_substitute,
)

__all__ = [
    "DEFAULT_DEGREE_CAP",
    "TaylorletSpec",
    "RestrictivenessItem",
    "RestrictivenessReport",
    "lcm_upto",
    "construct_phi_nr",
    "build_taylorlet",
    "iterated_antiderivative",
    "restrictiveness_check",
    "taylorlet_to_dict",
    "taylorlet_from_dict",
    "save_taylorlet",
    "load_taylorlet",
]

DEFAULT_DEGREE_CAP = 10_000


def lcm_upto(n: int) -> int:
    """v_n, the least common multiple of 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.lcm(*range(1, n + 1))


@dataclass(frozen=True)
class TaylorletSpec:
    """A separable analyzing taylorlet g (x) h with cached antiderivatives.

    `antider[j]` is the j-fold running integral of g from -infinity, for
    j = 0..moments_r-1 (index 0 is g itself).  All members are exact.
    """

    g: GaussExpPoly
    h: GaussExpPoly
    order_n: int
    moments_r: int
    antider: tuple[GaussExpPoly, ...]

    def __post_init__(self):
        if self.order_n < 1 or self.moments_r < 1:
            raise ValueError("order_n and moments_r must be >= 1")
        if len(self.antider) != self.moments_r:
            raise ValueError("antiderivative cache must hold g, I g, ..., I^(r-1) g")
        if not self.antider or self.antider[0] != self.g:
            raise ValueError("antider[0] must be g itself")


def construct_phi_nr(n: int, r: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> GaussExpPoly:
    """The normalized (2 r v_n)-th derivative of exp(-t^(2 v_n)).

    Every surviving power is a multiple of 2 v_n, which is what makes the
    later |t|^(1/v_n) substitution smooth.
    """
    if n < 1 or r < 1:
        raise ValueError("n and r must be >= 1")
    v = lcm_upto(n)
    W = 2 * v
    steps = 2 * r * v
    final_degree = steps * (W - 1)
    if final_degree > degree_cap:
        raise ResourceLimit(
            f"construction of order n={n} with r={r} needs a degree-{final_degree} "
            f"polynomial (cap {degree_cap})"
        )
    f = GaussExpPoly(W, {0: Fraction(1)})
    for _ in range(steps):
        f = differentiate(f)
    scale = Fraction(1, math.factorial(steps))
    return GaussExpPoly(W, {p: c * scale for p, c in f.coeffs.items()})


def build_taylorlet(n: int, r: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> TaylorletSpec:
    """Construct the order-n taylorlet with 2r-1 vanishing moments.

    g = (1 + t) * phi_nr(|t|^(1/v_n)), h = exp(-t^2).  The antiderivative
    cache is filled up to order 2r-2; each stage exists because the previous
    one still has a vanishing total integral.
    """
    phi_nr = construct_phi_nr(n, r, degree_cap)
    g = apply_one_plus_t(power_substitute(phi_nr))
    h = GaussExpPoly(2, {0: Fraction(1)})
    moments = 2 * r - 1
    chain = [g]
    for _ in range(moments - 1):
        chain.append(antiderivative(chain[-1]))
    return TaylorletSpec(g=g, h=h, order_n=n, moments_r=moments, antider=tuple(chain))


def iterated_antiderivative(spec: TaylorletSpec, j: int) -> GaussExpPoly:
    """I_+^j g for 0 <= j < moments_r (j = 0 returns g)."""
    if j < 0:
        raise ValueError("j must be >= 0")
    if j >= spec.moments_r:
        raise OrderTooHigh(
            f"I^{j} g is not Schwartz for a taylorlet with {spec.moments_r} "
            "vanishing moments"
        )
    return spec.antider[j]


@dataclass(frozen=True)
class RestrictivenessItem:
    j: int
    value: Fraction | float
    exact: bool
    nonzero: bool


@dataclass(frozen=True)
class RestrictivenessReport:
    items: tuple[RestrictivenessItem, ...]
    h_integral: float
    h_nonzero: bool

    @property
    def passed(self) -> bool:
        return self.h_nonzero and all(it.nonzero for it in self.items)


def _tail_cutoff(degree: int, eps: float = 1e-20) -> float:
    # |t|^degree * exp(-t^2) <= eps for |t| >= T; two fixed-point rounds suffice.
    T = 8.0
    for _ in range(3):
        T = math.sqrt(math.log(1.0 / eps) + max(degree, 1) * math.log(max(T, 2.0)))
    return max(T, 8.0)


def restrictiveness_check(spec: TaylorletSpec) -> RestrictivenessReport:
    """Values I_+^j g(0) for j = 0..moments_r, plus the integral of h.

    Orders below moments_r come exactly from the cached antiderivatives
    (their constant coefficients).  The order-moments_r value has no
    polynomial antiderivative, so it is evaluated numerically through the
    iterated-integral formula I^j g(0) = 1/(j-1)! * int_{-inf}^0 (-v)^(j-1) g(v) dv.
    """
    from .quadrature import QuadratureConfig, quad_gauss_kronrod

    items = []
    for j in range(spec.moments_r):
        val = spec.antider[j].value_at_zero()
        items.append(RestrictivenessItem(j=j, value=val, exact=True, nonzero=val != 0))

    j = spec.moments_r
    coeffs = spec.g.float_coeffs()

    def integrand(v):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * v + c
        return acc * math.exp(-v * v) * (-v) ** (j - 1)

    lo = -_tail_cutoff(spec.g.degree + j)
    cfg = QuadratureConfig()
    num, _ = quad_gauss_kronrod(integrand, (lo, 0.0), cfg)
    num /= math.factorial(j - 1)
    items.append(
        RestrictivenessItem(j=j, value=num, exact=False, nonzero=abs(num) > 1e-12)
    )

    h_coeffs = spec.h.float_coeffs()

    def h_integrand(v):
        acc = 0.0
        for c in reversed(h_coeffs):
            acc = acc * v + c
        return acc * math.exp(-v * v)

    cut = _tail_cutoff(spec.h.degree)
    h_val, _ = quad_gauss_kronrod(h_integrand, (-cut, cut), cfg)
    return RestrictivenessReport(
        items=tuple(items), h_integral=h_val, h_nonzero=abs(h_val) > 1e-12
    )


# --- serialization ----------------------------------------------------------

def _poly_to_dict(f: GaussExpPoly) -> dict:
    return {
        "W": f.weight_power,
        "coeffs": [[p, f"{c.numerator}/{c.denominator}"] for p, c in sorted(f.coeffs.items())],
    }


def _poly_from_dict(d: dict) -> GaussExpPoly:
    try:
        W = int(d["W"])
        coeffs = {}
        for p, s in d["coeffs"]:
            num, den = str(s).split("/")
            coeffs[int(p)] = Fraction(int(num), int(den))
        return GaussExpPoly(W, coeffs)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SceneFormatError(f"malformed Gaussian-polynomial entry: {exc}") from exc


def taylorlet_to_dict(spec: TaylorletSpec) -> dict:
    return {
        "order_n": spec.order_n,
        "moments_r": spec.moments_r,
        "g": _poly_to_dict(spec.g),
        "h": _poly_to_dict(spec.h),
        "antider": [_poly_to_dict(f) for f in spec.antider[1:]],
    }


def taylorlet_from_dict(d: dict) -> TaylorletSpec:
    try:
        g = _poly_from_dict(d["g"])
        h = _poly_from_dict(d["h"])
        chain = [g] + [_poly_from_dict(e) for e in d["antider"]]
        return TaylorletSpec(
            g=g,
            h=h,
            order_n=int(d["order_n"]),
            moments_r=int(d["moments_r"]),
            antider=tuple(chain),
        )
    except SceneFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneFormatError(f"malformed taylorlet description: {exc}") from exc


def save_taylorlet(spec: TaylorletSpec, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(taylorlet_to_dict(spec), fh, indent=1)
        fh.write("\n")


def load_taylorlet(path: str) -> TaylorletSpec:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SceneFormatError(f"cannot read taylorlet file {path}: {exc}") from exc
    return taylorlet_from_dict(d)
