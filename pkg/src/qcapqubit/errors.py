"""Exception types raised by the toolkit."""


class QCapError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(QCapError, ValueError):
    """An input violates a parameter invariant (bad area, negative L, NaN...)."""


class NumericDomainError(QCapError, ArithmeticError):
    """A numerical procedure left its domain of validity."""


class SolverError(QCapError, RuntimeError):
    """An eigenvalue computation failed or did not converge."""


class SweepError(QCapError, RuntimeError):
    """Every row of a sweep failed."""
