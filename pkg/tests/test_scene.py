import math

import pytest

from taylorlets import (
    CircleCurve,
    CosineCurve,
    DomainError,
    FeasibleScene,
    FeasibleTerm,
    PolynomialCurve,
    SceneFormatError,
    scene_from_dict,
    scene_to_dict,
    unit_ball_scene,
)


class TestPolynomialCurve:
    def test_value_and_derivatives(self):
        q = PolynomialCurve((1.0, -2.0, 3.0))  # 1 - 2x + 3x^2
        assert q.value(0.5) == pytest.approx(1 - 1 + 0.75)
        assert q.derivative(0.5, 1) == pytest.approx(-2 + 3.0)
        assert q.derivative(0.5, 2) == pytest.approx(6.0)
        assert q.derivative(0.5, 3) == 0.0

    def test_unbounded_domain(self):
        q = PolynomialCurve((0.0,))
        assert q.contains(1e9)


class TestCircleCurve:
    def test_branches(self):
        left = CircleCurve(1.0, "left")
        right = CircleCurve(1.0, "right")
        assert left.value(0.0) == -1.0
        assert right.value(0.0) == 1.0
        assert left.value(0.6) == pytest.approx(-0.8)

    def test_curvature_signs_at_center(self):
        assert CircleCurve(1.0, "left").derivative(0.0, 2) == pytest.approx(1.0)
        assert CircleCurve(1.0, "right").derivative(0.0, 2) == pytest.approx(-1.0)

    def test_derivatives_against_finite_differences(self):
        # Step sizes balance truncation against cancellation per order.
        q = CircleCurve(2.0, "left")
        x = 0.7
        h = 1e-6
        d1 = (q.value(x + h) - q.value(x - h)) / (2 * h)
        assert q.derivative(x, 1) == pytest.approx(d1, rel=1e-8)
        h = 1e-4
        d2 = (q.value(x + h) - 2 * q.value(x) + q.value(x - h)) / h**2
        assert q.derivative(x, 2) == pytest.approx(d2, rel=1e-5)
        h = 1e-2
        d3 = (q.value(x + 2*h) - 2*q.value(x + h) + 2*q.value(x - h)
              - q.value(x - 2*h)) / (2 * h**3)
        assert q.derivative(x, 3) == pytest.approx(d3, rel=1e-3)

    def test_domain_error(self):
        q = CircleCurve(1.0)
        with pytest.raises(DomainError):
            q.value(1.0)
        with pytest.raises(DomainError):
            q.derivative(-1.5, 1)


class TestCosineCurve:
    def test_derivative_ladder(self):
        q = CosineCurve(2.0, 3.0, 0.25)
        x = 0.4
        assert q.value(x) == pytest.approx(2 * math.cos(3 * x + 0.25))
        assert q.derivative(x, 1) == pytest.approx(-6 * math.sin(3 * x + 0.25))
        assert q.derivative(x, 2) == pytest.approx(-18 * math.cos(3 * x + 0.25))
        assert q.derivative(x, 4) == pytest.approx(162 * math.cos(3 * x + 0.25))


class TestSceneModel:
    def test_term_validation(self):
        with pytest.raises(ValueError):
            FeasibleTerm(1.0, PolynomialCurve((0.0,)), j=-1)
        with pytest.raises(ValueError):
            FeasibleTerm(1.0, PolynomialCurve((0.0,)), sign=2)
        with pytest.raises(ValueError):
            FeasibleScene(terms=())

    def test_unit_ball_decomposition(self):
        scene = unit_ball_scene()
        assert len(scene.terms) == 2
        weights = sorted(t.weight for t in scene.terms)
        assert weights == [-1.0, 1.0]
        assert all(t.j == 1 and t.sign == 1 for t in scene.terms)

    def test_json_round_trip(self):
        scene = FeasibleScene(terms=(
            FeasibleTerm(0.5, PolynomialCurve((0.0, 0.0, 1.0)), j=1, sign=1),
            FeasibleTerm(-2.0, CosineCurve(1.0, 2.0, 0.1), j=2, sign=-1),
            FeasibleTerm(1.0, CircleCurve(3.0, "right"), j=1, sign=1),
        ))
        back = scene_from_dict(scene_to_dict(scene))
        assert back == scene

    def test_malformed_scene(self):
        with pytest.raises(SceneFormatError):
            scene_from_dict({"terms": [{"weight": 1.0, "curve": {"kind": "blob"}}]})
        with pytest.raises(SceneFormatError):
            scene_from_dict({})
