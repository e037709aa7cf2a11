"""
Exception hierarchy for the magnomech simulator.

Every error raised on purpose by the library derives from MagnomechError so the
CLI can map failures onto exit codes without catching unrelated exceptions.
"""

from typing import Optional


class MagnomechError(Exception):
    """Base class for all simulator errors."""


class DomainError(MagnomechError, ValueError):
    """An input lies outside the domain of an operation (negative rate, bad label...)."""


class ConfigError(MagnomechError):
    """A run configuration is malformed, inconsistent or references unknown keys."""


class ConvergenceError(MagnomechError):
    """The self-consistent steady-state iteration did not converge.

    Attributes:
        last_iterate: The SteadyState reached at the final iteration.
    """

    def __init__(self, message: str, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class SingularityError(MagnomechError):
    """A closed-form expression hit an exact pole."""


class NoSteadyStateError(MagnomechError):
    """The drift matrix is not Hurwitz-stable, so no steady-state covariance exists.

    Attributes:
        max_real_eig: Largest real part among the drift-matrix eigenvalues.
    """

    def __init__(self, message: str, max_real_eig: Optional[float] = None):
        super().__init__(message)
        self.max_real_eig = max_real_eig


class NumericalError(MagnomechError):
    """A linear-algebra routine failed or missed its accuracy target.

    Attributes:
        condition: Condition-number estimate of the failing system, when known.
    """

    def __init__(self, message: str, condition: Optional[float] = None):
        super().__init__(message)
        self.condition = condition


class PhysicalityError(MagnomechError):
    """A covariance matrix violates the uncertainty principle beyond tolerance."""
