"""Exception hierarchy.

Numerical failures (exit code 3 from the CLI) derive from NumericalError;
input problems (exit code 2) derive from InputError.
"""


class ShapeStatError(Exception):
    pass


class InputError(ShapeStatError, ValueError):
    pass


class NumericalError(ShapeStatError, ArithmeticError):
    pass


class DegenerateConfiguration(InputError):
    """All landmarks of a k-ad coincide, so no preshape exists."""


class EmptySample(InputError):
    pass


class DomainError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ShapeMismatch(ParseError):
    pass


class DegenerateVariance(NumericalError):
    pass


class FocalMean(NumericalError):
    """Top eigenvalue of the averaged embedding is not simple."""


class SingularCovariance(NumericalError):
    pass


class SingularLambda(NumericalError):
    pass


class NumericalFailure(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class OutOfInjectivityRadius(NumericalError):
    pass


class CutLocus(NumericalError):
    pass


class SupportTooWide(UserWarning):
    """Sample is not inside a ball of radius pi/4 about the starting point.

    The uniqueness condition is sufficient, not necessary, so this is only
    a warning.
    """
