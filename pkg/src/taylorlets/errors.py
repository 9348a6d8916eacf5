"""Exception types shared across the package."""


class TaylorletError(Exception):
    """Base class for all package errors."""


class ResourceLimit(TaylorletError):
    """Construction would exceed the configured polynomial degree cap."""


class NonSmoothSubstitution(TaylorletError):
    """Power substitution hit an exponent that is not a multiple of 2v."""


class NotElementary(TaylorletError):
    """No polynomial-times-Gaussian antiderivative exists (total integral != 0)."""


class OrderTooHigh(TaylorletError):
    """Requested iterated antiderivative order >= number of vanishing moments."""


class DomainError(TaylorletError):
    """Point outside a singularity curve's domain, or window exceeds it."""


class InvalidCase(TaylorletError):
    """Scaling exponent alpha outside the range of the requested decay case."""


class QuadratureFailure(TaylorletError):
    """Adaptive quadrature did not meet tolerance within the subdivision cap."""

    def __init__(self, message, value=None, err_estimate=None):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate


class TrackLost(TaylorletError):
    """Maxima tracking found no local maximum within the search window."""

    def __init__(self, message, stage=None, track=None):
        super().__init__(message)
        self.stage = stage
        self.track = track


class NonPositiveMagnitude(TaylorletError):
    """Decay fit requested over magnitudes that are not strictly positive."""


class SceneFormatError(TaylorletError):
    """Malformed scene, taylorlet or run-config description."""


class DomainClipWarning(UserWarning):
    """Integration window was clipped to a curve's open domain."""
