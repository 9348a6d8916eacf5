"""Frozen closed forms of the worked (n=2, r=2) example, kept independent
of the construction code so exact comparisons are meaningful."""

import math
from fractions import Fraction

from taylorlets import GaussExpPoly

# phi_22 = 1/630 * (315 - 51660 t^4 + 286020 t^8 - 349440 t^12 + 142464 t^16
#                   - 21504 t^20 + 1024 t^24) * exp(-t^4)
PHI22_POLY = {0: 315, 4: -51660, 8: 286020, 12: -349440, 16: 142464,
              20: -21504, 24: 1024}


def phi22_reference() -> GaussExpPoly:
    return GaussExpPoly(4, {p: Fraction(c, 630) for p, c in PHI22_POLY.items()})


# g = 64/8! * (1+x) * (315 - 51660 x^2 + 286020 x^4 - 349440 x^6
#              + 142464 x^8 - 21504 x^10 + 1024 x^12) * exp(-x^2)
G22_EVEN = {0: 315, 2: -51660, 4: 286020, 6: -349440, 8: 142464,
            10: -21504, 12: 1024}


def g22_reference() -> GaussExpPoly:
    scale = Fraction(64, math.factorial(8))
    coeffs = {}
    for p, c in G22_EVEN.items():
        coeffs[p] = coeffs.get(p, Fraction(0)) + scale * c
        coeffs[p + 1] = coeffs.get(p + 1, Fraction(0)) + scale * c
    return GaussExpPoly(2, coeffs)


def g22_closed_form(x: float) -> float:
    even = sum(c * x ** p for p, c in G22_EVEN.items())
    return 64.0 / math.factorial(8) * (1.0 + x) * even * math.exp(-x * x)


# int_{-inf}^t g = -32/8! * (-9 - 630 t - 324 t^2 + 34020 t^3 + 25668 t^4
#   - 100800 t^5 - 86784 t^6 + 71040 t^7 + 65664 t^8 - 15872 t^9
#   - 15360 t^10 + 1024 t^11 + 1024 t^12) * exp(-t^2)
IG22_POLY = {0: -9, 1: -630, 2: -324, 3: 34020, 4: 25668, 5: -100800,
             6: -86784, 7: 71040, 8: 65664, 9: -15872, 10: -15360,
             11: 1024, 12: 1024}


def antiderivative22_reference() -> GaussExpPoly:
    scale = Fraction(-32, math.factorial(8))
    return GaussExpPoly(2, {p: scale * c for p, c in IG22_POLY.items()})
