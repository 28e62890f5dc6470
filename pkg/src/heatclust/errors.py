"""Exception types raised by heatclust."""


class HeatclustError(Exception):
    """Base class for all heatclust errors."""


class NumericalError(HeatclustError):
    """A computation produced non-finite values."""


class NoUnitEigenvalue(NumericalError):
    """The heat operator has no eigenvalue within tolerance of 1."""


class DegenerateEigenbasis(NumericalError):
    """A pivot in the eigenbasis elimination fell below the rank threshold."""


class MalformedInput(HeatclustError):
    """Input data could not be parsed.

    ``line`` is the 1-based line number in the source file, when known.
    """

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
