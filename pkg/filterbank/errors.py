"""Error kinds raised by the filter bank modules.

Validation errors subclass ``ValueError`` and map to CLI exit code 2;
numerical failures subclass ``ArithmeticError`` and map to exit code 3.
"""


class GraphFBError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(GraphFBError, ValueError):
    pass


class NumericalError(GraphFBError, ArithmeticError):
    pass


# graph-core
class SelfLoopError(ValidationError):
    pass


class NegativeWeightError(ValidationError):
    pass


class DisconnectedError(ValidationError):
    pass


class DuplicateEdgeConflictError(ValidationError):
    pass


class InvalidParamError(ValidationError):
    pass


class LengthMismatchError(ValidationError):
    pass


class ShapeMismatchError(ValidationError):
    pass


class ParseError(ValidationError):
    pass


# spectral / sampler
class NotSymmetricError(ValidationError):
    pass


class NotOrthogonalError(ValidationError):
    pass


class TooLargeError(ValidationError):
    pass


class EigFailureError(NumericalError):
    pass


# filter design
class TieViolationError(ValidationError):
    pass


class OutOfRangeError(ValidationError):
    pass


class InfeasibleError(ValidationError):
    pass


class DegenerateSpectrumError(NumericalError):
    pass


# mallat / polyapprox / metrics
class InvalidDepthError(ValidationError):
    pass


class NoConvergenceError(NumericalError):
    pass


class ZeroSignalError(ValidationError):
    pass


class HypothesisViolatedError(ValidationError):
    pass
