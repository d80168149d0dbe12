"""
Domain errors for Bernoulli Frechet classes.

Every error is a Django ``ValidationError`` with a stable ``code`` so callers
(services, serializers, management commands) can branch on the kind of
failure without parsing messages.
"""
from django.core.exceptions import ValidationError


class FrechetError(ValidationError):
    default_code = "frechet"

    def __init__(self, message, code=None, params=None):
        super().__init__(message, code=code or self.default_code, params=params)


class MalformedRational(FrechetError):
    default_code = "malformed_rational"


class NegativeMass(FrechetError):
    default_code = "negative_mass"


class NotNormalized(FrechetError):
    default_code = "not_normalized"


class DegenerateMargin(FrechetError):
    default_code = "degenerate_margin"


class UnsupportedDimension(FrechetError):
    default_code = "unsupported_dimension"


class OutOfRange(FrechetError):
    default_code = "out_of_range"


class DimensionMismatch(FrechetError):
    default_code = "dimension_mismatch"


class NotAMember(FrechetError):
    default_code = "not_a_member"


class NotSigmaCm(FrechetError):
    default_code = "not_sigma_cm"


class InvalidWeights(FrechetError):
    default_code = "invalid_weights"


class UnequalMargins(FrechetError):
    default_code = "unequal_margins"


class InvalidGame(FrechetError):
    default_code = "invalid_game"
