"""Exact arithmetic for Gaussian-weighted polynomials P(t)*exp(-t^W).

All construction arithmetic is done with arbitrary-precision rationals
(`fractions.Fraction`), so derivatives, antiderivatives and point values
at t=0 are exact.  Only the moment integrals, which involve Gamma values
at rational arguments, are evaluated in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonSmoothSubstitution, NotElementary

__all__ = [
    "GaussExpPoly",
    "differentiate",
    "power_substitute",
    "apply_one_plus_t",
    "antiderivative",
    "evaluate",
    "moment_oracle",
    "moment_terms",
]


def _clean(coeffs: dict[int, Fraction]) -> dict[int, Fraction]:
    return {p: c for p, c in coeffs.items() if c != 0}


@dataclass(frozen=True)
class GaussExpPoly:
    """The function sum_p coeffs[p] * t^p * exp(-t^weight_power).

    `weight_power` must be even and >= 2; zero coefficients are never
    stored.  Instances are immutable and safe to share across threads.
    """

    weight_power: int
    coeffs: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.weight_power < 2 or self.weight_power % 2 != 0:
            raise ValueError(f"weight power must be even and >= 2, got {self.weight_power}")
        cleaned = {}
        for p, c in self.coeffs.items():
            if p < 0:
                raise ValueError(f"negative power {p}")
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c != 0:
                cleaned[int(p)] = c
        object.__setattr__(self, "coeffs", cleaned)

    @property
    def degree(self) -> int:
        """Degree of the polynomial part; -1 for the zero function."""
        return max(self.coeffs) if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, power: int) -> Fraction:
        return self.coeffs.get(power, Fraction(0))

    def value_at_zero(self) -> Fraction:
        """Exact value at t=0 (the exponential factor is 1 there)."""
        return self.coeffs.get(0, Fraction(0))

    def float_coeffs(self) -> list[float]:
        """Dense float coefficient list c[0..degree] for numeric evaluation."""
        d = self.degree
        out = [0.0] * (d + 1)
        for p, c in self.coeffs.items():
            out[p] = float(c)
        return out

    def __eq__(self, other):
        if not isinstance(other, GaussExpPoly):
            return NotImplemented
        return self.weight_power == other.weight_power and self.coeffs == other.coeffs

    def __repr__(self):
        terms = ", ".join(f"t^{p}: {c}" for p, c in sorted(self.coeffs.items()))
        return f"GaussExpPoly(W={self.weight_power}, {{{terms}}})"


def differentiate(f: GaussExpPoly) -> GaussExpPoly:
    """Exact derivative: (P' - W t^(W-1) P) * exp(-t^W)."""
    W = f.weight_power
    out: dict[int, Fraction] = {}
    for p, c in f.coeffs.items():
        if p >= 1:
            out[p - 1] = out.get(p - 1, Fraction(0)) + c * p
        q = p + W - 1
        out[q] = out.get(q, Fraction(0)) - W * c
    return GaussExpPoly(W, _clean(out))


def power_substitute(f: GaussExpPoly) -> GaussExpPoly:
    """Substitute t -> |t|^(2/W), mapping exp(-t^W) to exp(-t^2).

    Requires every stored power to be a multiple of W = 2v, so the result
    is again a polynomial (in t^2) times exp(-t^2) and hence smooth.
    """
    W = f.weight_power
    v = W // 2
    out: dict[int, Fraction] = {}
    for p, c in f.coeffs.items():
        if p % W != 0:
            raise NonSmoothSubstitution(
                f"power {p} is not a multiple of 2v = {W}; |t|^(1/{v}) substitution "
                "would not be smooth"
            )
        out[(p // W) * 2] = c
    return GaussExpPoly(2, out)


def apply_one_plus_t(f: GaussExpPoly) -> GaussExpPoly:
    """Multiply the polynomial part by (1 + t)."""
    out: dict[int, Fraction] = {}
    for p, c in f.coeffs.items():
        out[p] = out.get(p, Fraction(0)) + c
        out[p + 1] = out.get(p + 1, Fraction(0)) + c
    return GaussExpPoly(f.weight_power, _clean(out))


def antiderivative(f: GaussExpPoly) -> GaussExpPoly:
    """Exact antiderivative of P(t)*exp(-t^2) vanishing at -infinity.

    Solves R' - 2tR = P by the descending-degree coefficient recurrence
    (deg R = deg P - 1).  A polynomial solution exists iff the total
    integral of f vanishes; otherwise NotElementary is raised.  Since
    R(t)*exp(-t^2) is Schwartz, the result equals the running integral
    from -infinity.
    """
    if f.weight_power != 2:
        raise ValueError("antiderivative is implemented for weight power 2 only")
    if f.is_zero():
        return GaussExpPoly(2, {})
    d = f.degree
    r: dict[int, Fraction] = {}
    for j in range(d, 0, -1):
        r[j - 1] = ((j + 1) * r.get(j + 1, Fraction(0)) - f.coeff(j)) / 2
    # Remaining constraint from the t^0 equation: r_1 must equal p_0.
    if r.get(1, Fraction(0)) != f.coeff(0):
        raise NotElementary(
            "total integral of P(t)*exp(-t^2) is nonzero; no polynomial "
            "antiderivative exists"
        )
    return GaussExpPoly(2, _clean(r))


def evaluate(f: GaussExpPoly, t: float) -> float:
    """Horner evaluation of P(t) in double precision times exp(-t^W).

    Returns exactly 0.0 once the exponential underflows, regardless of the
    polynomial value.
    """
    arg = float(t) ** f.weight_power
    if arg > 745.0:  # exp underflows to 0 below ~exp(-745)
        return 0.0
    acc = 0.0
    for p in range(f.degree, -1, -1):
        acc = acc * t + float(f.coeffs.get(p, 0))
    return acc * math.exp(-arg)


def moment_terms(f: GaussExpPoly, k: int, m: int, sign: int = 1) -> list[float]:
    """Individual Gamma-formula summands of the integral f(sign*t^k) t^m dt.

    With f = sum_p c_p t^p exp(-t^2), substituting sign*t^k gives terms
    c_p sign^p t^(pk+m) exp(-t^(2k)); each integrates over the real line to
    Gamma((q+1)/(2k))/k for even q = pk+m and to 0 for odd q.
    """
    if f.weight_power != 2:
        raise ValueError("moment oracle requires weight power 2")
    if k < 1:
        raise ValueError("k must be >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    terms = []
    for p, c in sorted(f.coeffs.items()):
        q = p * k + m
        if q % 2 != 0:
            continue
        sgn = 1.0 if (sign == 1 or p % 2 == 0) else -1.0
        lg = math.lgamma((q + 1) / (2.0 * k)) - math.log(k)
        terms.append(sgn * float(c) * math.exp(lg))
    return terms


def moment_oracle(f: GaussExpPoly, k: int, m: int, sign: int = 1) -> float:
    """Analytic value of the higher-order moment integral f(sign*t^k) t^m dt."""
    return math.fsum(moment_terms(f, k, m, sign))
