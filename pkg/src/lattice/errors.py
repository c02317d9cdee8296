"""Exception hierarchy shared by every lattice module."""

from typing import Optional


class LatticeError(Exception):
    """Base class for all lattice laboratory errors."""


class NonFiniteInputError(LatticeError):
    """An amplitude is NaN or infinite where a finite state is required."""


class DimensionError(LatticeError):
    """Two states or arrays live on different lattices."""


class ParameterOrderError(LatticeError):
    """Exponents or indices given in the wrong order (e.g. p > q)."""


class HypothesisError(LatticeError):
    """A hypothesis of a bound or of an experiment is violated.

    Attributes:
        term: name of the violated hypothesis or parameter term
    """

    def __init__(self, message: str, term: Optional[str] = None):
        super().__init__(message)
        self.term = term


class InvalidRadiusError(LatticeError):
    """Requested absorbing radius does not exceed the limiting radius."""


class UnsupportedNonlinearityError(LatticeError):
    """The operation has no constructive form for this nonlinearity kind."""


class ConfigError(LatticeError):
    """Experiment configuration cannot be parsed or is inconsistent.

    Attributes:
        line: 1-based line number in the config file, when known
    """

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
