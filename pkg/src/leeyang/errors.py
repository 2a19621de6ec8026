"""Exception hierarchy.

The CLI maps these onto exit codes: ``RangeError`` -> 3, everything else
derived from ``NumericalError`` -> 4.
"""


class LeeYangError(Exception):
    """Base class for all package errors."""


class InvalidConfigurationError(LeeYangError, ValueError):
    """Spin configuration does not match the model's alphabet or volume."""


class RangeError(LeeYangError, ValueError):
    """Requested computation exceeds a configured size cap or is unsupported."""


class DomainError(LeeYangError, ValueError):
    """Evaluation point outside the domain (z = 0, branch point, ...)."""


class NumericalError(LeeYangError, ArithmeticError):
    """A numerical routine failed to deliver its accuracy contract."""


class ConditioningError(NumericalError):
    """DFT coefficient recovery left a large imaginary residual."""

    def __init__(self, message, ratio):
        super().__init__(message)
        self.ratio = ratio


class RootFindingError(NumericalError):
    """Aberth iteration did not converge for some roots.

    ``zeros`` holds the full (partially converged) ZeroSet, ``failed`` the
    indices whose residual exceeds the tolerance.
    """

    def __init__(self, message, zeros, failed):
        super().__init__(message)
        self.zeros = zeros
        self.failed = failed


class DegenerateGradientError(NumericalError):
    """Coexistence curve gradient vanished; likely a multiple point."""

    def __init__(self, message, z):
        super().__init__(message)
        self.z = z


class ConvergenceError(NumericalError):
    """Newton-type iteration diverged or hit its iteration cap."""
