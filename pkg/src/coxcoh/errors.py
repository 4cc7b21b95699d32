"""Exception hierarchy shared by every module."""


class CoxcohError(Exception):
    """Base class for all errors raised by coxcoh."""


class ParseError(CoxcohError, ValueError):
    pass


class ValidationError(CoxcohError, ValueError):
    pass


class NonSymmetric(ValidationError):
    pass


class BadDiagonal(ValidationError):
    pass


class BadEntry(ValidationError):
    pass


class UnknownGenerator(ValidationError, KeyError):
    pass


class NotSpherical(ValidationError):
    pass


class NotNested(ValidationError):
    pass


class NotFinite(ValidationError):
    pass


class NotASubcomplex(ValidationError):
    pass


class BadIncidence(ValidationError):
    pass


class MirrorNotSubcomplex(ValidationError):
    pass


class NonSphericalMirrorIntersection(ValidationError):
    pass


class NotRightAngledSpherical(ValidationError):
    pass


class ZeroDenominator(ValidationError, ZeroDivisionError):
    pass


class OutOfTrustRadius(CoxcohError):
    """A truncated computation was asked for data outside the region where it is exact."""


class ResourceLimit(CoxcohError):
    pass


class VerificationFailure(CoxcohError):
    """An identity that must hold exactly failed; ``witness`` holds the smallest counterexample."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
