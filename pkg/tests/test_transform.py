import math

import numpy as np
import pytest

from taylorlets import (
    BACKEND,
    CircleCurve,
    CosineCurve,
    DomainError,
    FeasibleScene,
    FeasibleTerm,
    InvalidCase,
    OrderTooHigh,
    PolynomialCurve,
    QuadratureConfig,
    TransformQuery,
    dense_trapezoid_transform,
    graph_jump_scene,
    highest_approximation_order,
    predicted_decay_exponent,
    shear_residual,
    taylorlet_transform,
    unit_ball_scene,
)
from taylorlets import _backend
from taylorlets.gausspoly import evaluate
from taylorlets.transform import build_plans, cell_value

PARABOLA = graph_jump_scene(PolynomialCurve((0.0, 0.0, 1.0)), j=1, sign=1)
CFG = QuadratureConfig()


def q22(a, s, t=0.0, alpha=0.4):
    return TransformQuery(a=a, s=s, t=t, alpha=alpha, n=2)


class TestShearResidual:
    def test_exact_taylor_match_is_zero(self):
        q = PolynomialCurve((0.0, 0.0, 1.0))
        for x2 in (-1.0, 0.0, 0.3, 2.0):
            assert shear_residual(q, (0.0, 0.0, 2.0), 0.0, x2) == pytest.approx(0.0, abs=1e-15)

    def test_cosine_residual_value(self):
        q = CosineCurve(1.0, 1.0, 0.0)
        res = shear_residual(q, (1.0, 0.0, -1.0), 0.0, 0.1)
        assert res == pytest.approx(math.cos(0.1) - 0.995, rel=1e-12)
        assert res == pytest.approx(4.1652780258e-6, rel=1e-6)

    def test_circle_tangent_line(self):
        q = CircleCurve(1.0, "left")
        assert shear_residual(q, (-1.0, 0.0, 1.0), 0.0, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_domain_error(self):
        q = CircleCurve(1.0, "left")
        with pytest.raises(DomainError):
            shear_residual(q, (0.0,), 0.0, 2.0)

    def test_translation_enters_through_powers(self):
        q = PolynomialCurve((0.0, 1.0))  # q = x2
        # s = (q(t), q'(t)) makes the residual vanish around any t.
        assert shear_residual(q, (0.7, 1.0), 0.7, 1.3) == pytest.approx(0.0, abs=1e-15)


class TestHighestApproximationOrder:
    def test_cosine_full_match(self):
        q = CosineCurve(1.0, 1.0, 0.0)
        assert highest_approximation_order(q, (1.0, 0.0, -1.0), 0.0, 2) == 2

    def test_cosine_partial_match(self):
        q = CosineCurve(1.0, 1.0, 0.0)
        assert highest_approximation_order(q, (1.0, 0.0, 0.0), 0.0, 2) == 1

    def test_wrong_position(self):
        q = CosineCurve(1.0, 1.0, 0.0)
        assert highest_approximation_order(q, (0.0, 0.0, 0.0), 0.0, 2) == -1

    def test_tolerance(self):
        q = CosineCurve(1.0, 1.0, 0.0)
        assert highest_approximation_order(q, (1.0 + 5e-13, 0.0, -1.0), 0.0, 2) == 2
        assert highest_approximation_order(q, (1.0 + 5e-9, 0.0, -1.0), 0.0, 2) == -1


class TestPredictedDecayExponent:
    def test_slow_decay_case(self):
        assert predicted_decay_exponent(1, 3, 0.4, 2, 2) == pytest.approx(0.7)

    def test_fast_decay_cases(self):
        assert predicted_decay_exponent(1, 3, 0.4, 1, 2) == pytest.approx(1.1)
        assert predicted_decay_exponent(1, 3, 0.4, 0, 2) == pytest.approx(1.9)

    def test_wrong_position_superpolynomial(self):
        assert math.isinf(predicted_decay_exponent(1, 3, 0.9, -1, 2))

    def test_alpha_boundaries_rejected(self):
        with pytest.raises(InvalidCase):
            predicted_decay_exponent(1, 3, 0.5, 1, 2)   # alpha = 1/n
        with pytest.raises(InvalidCase):
            predicted_decay_exponent(1, 3, 1.0 / 3.0, 2, 2)  # alpha = 1/(n+1)
        with pytest.raises(InvalidCase):
            predicted_decay_exponent(1, 3, 0.55, 1, 2)

    def test_requires_j_less_than_r(self):
        with pytest.raises(ValueError):
            predicted_decay_exponent(3, 3, 0.4, 2, 2)


class TestTransformBasics:
    def test_zero_weight_scene(self, spec22):
        scene = graph_jump_scene(PolynomialCurve((0.0, 0.0, 1.0)), weight=0.0)
        assert taylorlet_transform(scene, spec22, q22(2.0**-5, (0, 0, 2))) == 0.0

    def test_query_validation(self):
        with pytest.raises(ValueError):
            TransformQuery(a=-1.0, s=(0, 0, 0), t=0.0, alpha=0.4, n=2)
        with pytest.raises(ValueError):
            TransformQuery(a=0.5, s=(0, 0), t=0.0, alpha=0.4, n=2)
        with pytest.raises(ValueError):
            TransformQuery(a=0.5, s=(0, 0, 0), t=0.0, alpha=1.5, n=2)

    def test_term_order_must_be_below_moments(self, spec22):
        scene = graph_jump_scene(PolynomialCurve((0.0,)), j=3)
        with pytest.raises(OrderTooHigh):
            taylorlet_transform(scene, spec22, q22(0.1, (0, 0, 0)))

    def test_nonstandard_window_function_refused(self, spec22):
        from dataclasses import replace
        from taylorlets import GaussExpPoly
        odd_h = replace(spec22, h=GaussExpPoly(2, {0: 1, 2: 1}))
        with pytest.raises(NotImplementedError):
            taylorlet_transform(PARABOLA, odd_h, q22(0.1, (0, 0, 0)))

    def test_case3_slope_example(self, spec22):
        v6 = taylorlet_transform(PARABOLA, spec22, q22(2.0**-6, (0, 0, 2)))
        v10 = taylorlet_transform(PARABOLA, spec22, q22(2.0**-10, (0, 0, 2)))
        slope = math.log2(abs(v6) / abs(v10)) / 4.0
        assert slope == pytest.approx(0.7, abs=0.01)

    def test_wrong_position_is_superpolynomially_small(self, spec22):
        right = abs(taylorlet_transform(PARABOLA, spec22, q22(2.0**-10, (0, 0, 2))))
        wrong = abs(taylorlet_transform(PARABOLA, spec22, q22(2.0**-10, (5, 0, 0))))
        assert wrong < 1e-12 * right

    def test_linearity_over_terms(self, spec22):
        ball = unit_ball_scene()
        query = q22(2.0**-5, (-0.8, 0.1, 0.4))
        whole = taylorlet_transform(ball, spec22, query)
        parts = sum(
            taylorlet_transform(FeasibleScene(terms=(term,)), spec22, query)
            for term in ball.terms
        )
        assert whole == pytest.approx(parts, rel=1e-9, abs=1e-13)

    def test_translation_covariance(self, spec22):
        # Transform at (a, s, t) equals the transform at t=0 of the
        # recentered curve q(. + t).
        c0, c1, c2 = 0.05, 0.1, 0.3
        t = 0.4
        scene = graph_jump_scene(PolynomialCurve((c0, c1, c2)), j=1, sign=1)
        shifted = graph_jump_scene(
            PolynomialCurve((c0 + c1 * t + c2 * t * t, c1 + 2 * c2 * t, c2)),
            j=1, sign=1)
        s = (0.1, -0.2, 0.5)
        a = 2.0**-5
        v1 = taylorlet_transform(scene, spec22, q22(a, s, t=t))
        v2 = taylorlet_transform(shifted, spec22, q22(a, s, t=0.0))
        assert v1 == pytest.approx(v2, rel=1e-9)

    def test_window_doubling_stability(self, spec22):
        base = QuadratureConfig()
        double = QuadratureConfig(window_eps=base.window_eps**4)
        query = q22(2.0**-6, (0, 0, 2))
        v1 = taylorlet_transform(PARABOLA, spec22, query, base)
        v2 = taylorlet_transform(PARABOLA, spec22, query, double)
        assert abs(v1 - v2) <= 1e-10 * abs(v1)

    def test_domain_clip_warns_and_strict_raises(self, spec22):
        ball = unit_ball_scene()
        query = q22(2.0**-2, (-1.0, 0.0, 0.0))
        with pytest.warns(UserWarning):
            taylorlet_transform(ball, spec22, query)
        with pytest.raises(DomainError):
            taylorlet_transform(ball, spec22, query, clip_domain=False)

    def test_delta_scene_grows_at_matched_shear(self, spec22):
        # j = 0 term: at the fully matched shear the magnitude scales like
        # a^((alpha-1)/2), i.e. it grows as a -> 0.
        scene = graph_jump_scene(PolynomialCurve((0.0, 0.0, 1.0)), j=0, sign=1)
        v6 = taylorlet_transform(scene, spec22, q22(2.0**-6, (0, 0, 2)))
        v10 = taylorlet_transform(scene, spec22, q22(2.0**-10, (0, 0, 2)))
        slope = math.log2(abs(v6) / abs(v10)) / 4.0
        assert slope == pytest.approx(-0.3, abs=0.01)
        query = q22(2.0**-5, (0.05, 0.1, 1.5))
        gk = taylorlet_transform(scene, spec22, query)
        tz = dense_trapezoid_transform(scene, spec22, query)
        assert gk == pytest.approx(tz, rel=1e-7)

    def test_restrictive_taylorlet_sees_halfplane_monomials(self, spec22):
        # Scenes x1^k * H(x1) = k! * I_+^(k+1) delta(x1 - 0): a restrictive
        # taylorlet must keep a nonzero response at s = 0 on all scales.
        for k in (0, 1):
            scene = graph_jump_scene(PolynomialCurve((0.0,)), j=k + 1, sign=1,
                                     weight=float(math.factorial(k)))
            for i in range(4, 9):
                val = taylorlet_transform(scene, spec22, q22(2.0**-i, (0, 0, 0)))
                assert abs(val) > 1e-10, (k, i)


class TestOrderThree:
    def test_cubic_scene_with_order3_taylorlet(self):
        # Nothing in the pipeline is specific to order 2: a cubic edge with
        # third-order shears follows the slow-decay exponent at alpha = 0.3.
        from taylorlets import build_taylorlet
        spec = build_taylorlet(3, 2)
        assert spec.moments_r == 3 and spec.g.degree == 45
        scene = graph_jump_scene(PolynomialCurve((0.0, 0.0, 0.0, 1.0)), j=1, sign=1)

        def value(a):
            q = TransformQuery(a=a, s=(0.0, 0.0, 0.0, 6.0), t=0.0, alpha=0.3, n=3)
            return taylorlet_transform(scene, spec, q)

        slope = math.log2(abs(value(2.0**-6)) / abs(value(2.0**-10))) / 4.0
        assert slope == pytest.approx(
            predicted_decay_exponent(1, 3, 0.3, 3, 3), abs=0.01)
        q6 = TransformQuery(a=2.0**-6, s=(0.0, 0.0, 0.0, 6.0), t=0.0, alpha=0.3, n=3)
        tz = dense_trapezoid_transform(scene, spec, q6)
        assert value(2.0**-6) == pytest.approx(tz, rel=1e-9)


class TestBackends:
    def test_fallback_matches_selected_backend(self, spec22):
        plans = build_plans(PARABOLA, spec22)
        coeffs, kind, params, weight, j, domain = plans[0]
        a = 2.0**-6
        sfact = np.array([0.0, 0.1, 0.5])
        half = math.sqrt(math.log(1e16)) * a**0.4
        args = (coeffs, kind, params, a, a**-0.4, 0.0, sfact, -half, half,
                1e-9, 1e-12, 2000)
        v_sel, e_sel, ok_sel = _backend.term_integral(*args)
        v_py, e_py, ok_py = _backend.fallback_term_integral(*args)
        assert ok_sel and ok_py
        assert v_sel == pytest.approx(v_py, rel=1e-12)

    def test_backend_reports_name(self):
        assert BACKEND in ("compiled", "python")


class TestAgainstDenseTrapezoid:
    @pytest.mark.parametrize("a,s", [
        (2.0**-4, (0.0, 0.0, 2.0)),
        (2.0**-6, (0.1, -0.3, 1.0)),
        (2.0**-8, (0.0, 0.5, 0.0)),
    ])
    def test_parabola_queries(self, spec22, a, s):
        query = q22(a, s)
        gk = taylorlet_transform(PARABOLA, spec22, query)
        tz = dense_trapezoid_transform(PARABOLA, spec22, query)
        assert gk == pytest.approx(tz, rel=1e-7, abs=1e-15)

    def test_cosine_query(self, spec22):
        scene = graph_jump_scene(CosineCurve(1.0, 1.0, 0.0), j=1, sign=1)
        query = q22(2.0**-5, (1.0, 0.0, -1.0), t=0.0)
        gk = taylorlet_transform(scene, spec22, query)
        tz = dense_trapezoid_transform(scene, spec22, query)
        assert gk == pytest.approx(tz, rel=1e-7)

    def test_ball_with_clipped_window(self, spec22):
        ball = unit_ball_scene()
        query = q22(2.0**-3, (-1.0, 0.0, 0.5))
        with pytest.warns(UserWarning):
            gk = taylorlet_transform(ball, spec22, query)
            tz = dense_trapezoid_transform(ball, spec22, query)
        assert gk == pytest.approx(tz, rel=1e-7)


def _transform_2d_reference(spec, curve, j, sign, query, nx2=1601, nx1=2400):
    """Direct 2-D quadrature of <f, taylorlet_{a,s,t}> without the 1-D
    reduction: f = (sign*(x1-q))^(j-1)/(j-1)! on the sign side of the graph."""
    a, alpha, t, s = query.a, query.alpha, query.t, query.s
    half = math.sqrt(math.log(1e16)) * a**alpha
    x2 = np.linspace(t - half, t + half, nx2)
    gcoeffs = np.asarray(spec.g.float_coeffs())
    total = 0.0
    for xv in x2:
        qv = curve.value(float(xv))
        shear = sum(s[l] / math.factorial(l) * (xv - t) ** l for l in range(len(s)))
        glo, ghi = shear - 9.0 * a, shear + 9.0 * a
        if sign == 1:
            lo, hi = max(qv, glo), ghi
        else:
            lo, hi = glo, min(qv, ghi)
        if hi <= lo:
            continue
        x1 = np.linspace(lo, hi, nx1)
        u = (x1 - shear) / a
        pv = np.zeros_like(u)
        for c in gcoeffs[::-1]:
            pv = pv * u + c
        gvals = pv * np.exp(-u * u)
        dist = sign * (x1 - qv)
        fvals = dist ** (j - 1) / math.factorial(j - 1)
        inner = np.trapezoid(fvals * gvals, x1)
        total += inner * math.exp(-(((xv - t) / a**alpha) ** 2))
    total *= (x2[1] - x2[0]) * a ** (-(1 + alpha) / 2.0)
    return total


class TestReductionAgainst2D:
    """The j-fold partial-integration reduction must match the raw 2-D pairing."""

    @pytest.mark.parametrize("j,sign", [(1, 1), (2, 1), (1, -1), (2, -1)])
    def test_parabola_reduction(self, spec22, j, sign):
        curve = PolynomialCurve((0.0, 0.0, 1.0))
        scene = graph_jump_scene(curve, j=j, sign=sign)
        query = q22(2.0**-5, (0.1, 0.2, 1.0), t=0.15)
        reduced = taylorlet_transform(scene, spec22, query)
        direct = _transform_2d_reference(spec22, curve, j, sign, query)
        assert reduced == pytest.approx(direct, rel=2e-3)
