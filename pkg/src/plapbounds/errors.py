"""Exception hierarchy shared by every module."""


class PlapError(Exception):
    """Base class for all package errors."""


class DomainError(PlapError, ValueError):
    """An argument lies outside the admissible range of an operation."""


class SpecError(DomainError):
    """A CLI spec string does not match its grammar."""


class UnsupportedGeometry(PlapError, ValueError):
    """The requested bound is not available for this domain type."""


class ConvergenceError(PlapError, RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class NoSolutionAtThisHeight(ConvergenceError):
    """The radial profile never reaches zero from the given center value."""
