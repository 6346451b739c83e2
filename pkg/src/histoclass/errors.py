"""Exception types shared across the package.

The CLI maps these onto exit codes: ``DataError`` -> 2, ``NumericalError`` -> 3.
"""


class HistoclassError(Exception):
    """Base class for all package errors."""


class DataError(HistoclassError, ValueError):
    """Malformed, inconsistent or out-of-contract input data."""


class NumericalError(HistoclassError, ArithmeticError):
    """A computation produced a non-finite or undefined quantity."""


class UndefinedMomentError(NumericalError):
    """Skewness or kurtosis requested for a zero-variance series."""


class BundleFormatError(DataError):
    """A model bundle document could not be parsed or validated."""
