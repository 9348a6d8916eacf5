"""Singularity curves and feasible scenes.

A feasible scene is a weighted sum of single-graph singularity terms
w * I_sign^j delta(x1 - q(x2)); j = 1 with sign +1 is a Heaviside-type jump
across the graph of q.  Indicator-type functions are modelled as
differences of such terms (e.g. the unit ball as left branch minus right
branch of the circle).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import DomainError, SceneFormatError

__all__ = [
    "SingularityCurve",
    "PolynomialCurve",
    "CircleCurve",
    "CosineCurve",
    "FeasibleTerm",
    "FeasibleScene",
    "scene_from_dict",
    "scene_to_dict",
    "load_scene",
    "unit_ball_scene",
    "graph_jump_scene",
]

# Kernel encodings of the curve kinds.
KIND_POLYNOMIAL = 0
KIND_CIRCLE = 1
KIND_COSINE = 2


class SingularityCurve:
    """Base class: a smooth curve q with derivatives up to any order."""

    def domain(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def contains(self, x2: float) -> bool:
        lo, hi = self.domain()
        return lo < x2 < hi

    def _check(self, x2: float):
        if not self.contains(x2):
            raise DomainError(f"x2 = {x2} outside curve domain {self.domain()}")

    def value(self, x2: float) -> float:
        return self.derivative(x2, 0)

    def derivative(self, x2: float, order: int) -> float:
        raise NotImplementedError

    def kernel_encoding(self) -> tuple[int, list[float]]:
        raise NotImplementedError


@dataclass(frozen=True)
class PolynomialCurve(SingularityCurve):
    """q(x2) = sum_i coefficients[i] * x2^i."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    def derivative(self, x2: float, order: int) -> float:
        acc = 0.0
        d = len(self.coefficients) - 1
        for p in range(d, order - 1, -1):
            fac = 1.0
            for i in range(p, p - order, -1):
                fac *= i
            acc = acc * x2 + fac * self.coefficients[p]
        return acc

    def kernel_encoding(self):
        return KIND_POLYNOMIAL, list(self.coefficients)


@dataclass(frozen=True)
class CircleCurve(SingularityCurve):
    """One branch of the circle x1^2 + x2^2 = radius^2.

    The left branch is -sqrt(radius^2 - x2^2), the right branch the mirror
    image; both are defined on the open interval |x2| < radius.
    """

    radius: float
    branch: str = "left"

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.branch not in ("left", "right"):
            raise ValueError("branch must be 'left' or 'right'")

    def domain(self):
        return (-self.radius, self.radius)

    def derivative(self, x2: float, order: int) -> float:
        self._check(x2)
        sgn = -1.0 if self.branch == "left" else 1.0
        w = math.sqrt(self.radius ** 2 - x2 * x2)
        if order == 0:
            return sgn * w
        # Derivatives of w from Leibniz on w^2 = radius^2 - x2^2.
        derivs = [w]
        u = {1: -2.0 * x2, 2: -2.0}
        for m in range(1, order + 1):
            s = u.get(m, 0.0)
            for i in range(1, m):
                s -= math.comb(m, i) * derivs[i] * derivs[m - i]
            derivs.append(s / (2.0 * w))
        return sgn * derivs[order]

    def kernel_encoding(self):
        sgn = -1.0 if self.branch == "left" else 1.0
        return KIND_CIRCLE, [self.radius, sgn]


@dataclass(frozen=True)
class CosineCurve(SingularityCurve):
    """q(x2) = amplitude * cos(frequency * x2 + phase)."""

    amplitude: float = 1.0
    frequency: float = 1.0
    phase: float = 0.0

    def derivative(self, x2: float, order: int) -> float:
        return (
            self.amplitude
            * self.frequency ** order
            * math.cos(self.frequency * x2 + self.phase + order * math.pi / 2.0)
        )

    def kernel_encoding(self):
        return KIND_COSINE, [self.amplitude, self.frequency, self.phase]


@dataclass(frozen=True)
class FeasibleTerm:
    """One summand w * I_sign^j delta(x1 - q(x2))."""

    weight: float
    curve: SingularityCurve
    j: int = 1
    sign: int = 1

    def __post_init__(self):
        if self.j < 0:
            raise ValueError("smoothness order j must be >= 0")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass(frozen=True)
class FeasibleScene:
    terms: tuple[FeasibleTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a feasible scene needs at least one term")
        object.__setattr__(self, "terms", tuple(self.terms))

    def max_j(self) -> int:
        return max(t.j for t in self.terms)


def unit_ball_scene(radius: float = 1.0) -> FeasibleScene:
    """Indicator of the ball, as left-branch jump minus right-branch jump."""
    return FeasibleScene(terms=(
        FeasibleTerm(weight=1.0, curve=CircleCurve(radius, "left"), j=1, sign=1),
        FeasibleTerm(weight=-1.0, curve=CircleCurve(radius, "right"), j=1, sign=1),
    ))


def graph_jump_scene(curve: SingularityCurve, j: int = 1, sign: int = 1,
                     weight: float = 1.0) -> FeasibleScene:
    """Single-term scene w * I_sign^j delta(x1 - q(x2))."""
    return FeasibleScene(terms=(FeasibleTerm(weight, curve, j, sign),))


# --- serialization ----------------------------------------------------------

def _curve_from_dict(d: dict) -> SingularityCurve:
    kind = d.get("kind")
    if kind == "polynomial":
        return PolynomialCurve(tuple(float(c) for c in d["coefficients"]))
    if kind == "circle":
        return CircleCurve(radius=float(d["radius"]), branch=str(d.get("branch", "left")))
    if kind == "cosine":
        return CosineCurve(
            amplitude=float(d.get("amplitude", 1.0)),
            frequency=float(d.get("frequency", 1.0)),
            phase=float(d.get("phase", 0.0)),
        )
    raise SceneFormatError(f"unknown curve kind {kind!r}")


def _curve_to_dict(c: SingularityCurve) -> dict:
    if isinstance(c, PolynomialCurve):
        return {"kind": "polynomial", "coefficients": list(c.coefficients)}
    if isinstance(c, CircleCurve):
        return {"kind": "circle", "radius": c.radius, "branch": c.branch}
    if isinstance(c, CosineCurve):
        return {"kind": "cosine", "amplitude": c.amplitude,
                "frequency": c.frequency, "phase": c.phase}
    raise SceneFormatError(f"cannot serialize curve {type(c).__name__}")


def scene_from_dict(d: dict) -> FeasibleScene:
    try:
        terms = []
        for t in d["terms"]:
            terms.append(FeasibleTerm(
                weight=float(t["weight"]),
                curve=_curve_from_dict(t["curve"]),
                j=int(t.get("j", 1)),
                sign=int(t.get("sign", 1)),
            ))
        return FeasibleScene(terms=tuple(terms))
    except SceneFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneFormatError(f"malformed scene description: {exc}") from exc


def scene_to_dict(scene: FeasibleScene) -> dict:
    return {"terms": [
        {"weight": t.weight, "curve": _curve_to_dict(t.curve), "j": t.j, "sign": t.sign}
        for t in scene.terms
    ]}


def load_scene(path: str) -> FeasibleScene:
    try:
        with open(path) as fh:
            return scene_from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise SceneFormatError(f"cannot read scene file {path}: {exc}") from exc
