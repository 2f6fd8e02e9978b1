"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: input/data problems exit
with 2, parameter violations with 3, numerical failures with 4.
"""


class PotmadoError(Exception):
    """Base class for all package errors."""


class DataError(PotmadoError, ValueError):
    """Malformed input data (bad CSV rows, NaN/inf values, missing files)."""


class ParameterError(PotmadoError, ValueError):
    """Invalid parameter or specification (theta <= 0, m > n, c <= 0, ...)."""


class DomainError(ParameterError):
    """An argument fell outside its mathematical domain (u outside [0, 1], ...)."""


class NumericalError(PotmadoError, RuntimeError):
    """A numerical routine failed to converge or a quadrature broke down."""


class ReferenceMismatchError(ParameterError):
    """A reference Pickands curve does not match the configured DGP."""
