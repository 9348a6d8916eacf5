"""Taylorlet transform: exact construction, numerical evaluation, analysis.

The package builds restrictive analyzing taylorlets with higher-order
vanishing moments in exact rational arithmetic, evaluates their transform
on feasible (edge-type) scenes through a one-dimensional adaptive
Gauss-Kronrod reduction, and recovers position, orientation and curvature
of singularity curves from scale-space modulus maxima.
"""

from ._backend import BACKEND
from .analysis import (
    DecayEstimate,
    DetectGridConfig,
    DetectionResult,
    MaximaTrack,
    ScaleGrid,
    build_scale_grid,
    detect_coefficients,
    estimate_decay,
    find_local_maxima,
    normalize_per_scale,
    track_maxima,
)
from .errors import (
    DomainClipWarning,
    DomainError,
    InvalidCase,
    NonPositiveMagnitude,
    NonSmoothSubstitution,
    NotElementary,
    OrderTooHigh,
    QuadratureFailure,
    ResourceLimit,
    SceneFormatError,
    TaylorletError,
    TrackLost,
)
from .gausspoly import (
    GaussExpPoly,
    antiderivative,
    apply_one_plus_t,
    differentiate,
    evaluate,
    moment_oracle,
    moment_terms,
    power_substitute,
)
from .quadrature import QuadratureConfig, quad_gauss_kronrod
from .scene import (
    CircleCurve,
    CosineCurve,
    FeasibleScene,
    FeasibleTerm,
    PolynomialCurve,
    SingularityCurve,
    graph_jump_scene,
    load_scene,
    scene_from_dict,
    scene_to_dict,
    unit_ball_scene,
)
from .taylorlet import (
    TaylorletSpec,
    build_taylorlet,
    construct_phi_nr,
    iterated_antiderivative,
    lcm_upto,
    load_taylorlet,
    restrictiveness_check,
    save_taylorlet,
)
from .transform import (
    TransformQuery,
    dense_trapezoid_transform,
    highest_approximation_order,
    predicted_decay_exponent,
    shear_residual,
    taylorlet_transform,
)

__version__ = "0.1.0"
