"""Exception hierarchy.

Configuration problems derive from :class:`ValidationError` (CLI exit code 2),
numerical failures from :class:`NumericalError` (CLI exit code 3).
"""


class ProclimitsError(Exception):
    """Base class for all package errors."""


class ValidationError(ProclimitsError, ValueError):
    """Invalid input, configuration or request."""


class NumericalError(ProclimitsError, ArithmeticError):
    """A numerical procedure could not produce a valid result."""


class AlphaOutOfRange(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class BadExponent(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class TooFewPoints(ValidationError):
    pass


class AtomAtPoint(NumericalError):
    """Density requested at a point carrying positive probability mass."""


class NoConvergence(NumericalError):
    pass


class DensityVanishes(NumericalError):
    pass


class BelowFloor(NumericalError):
    pass


class NotPSD(NumericalError):
    pass
