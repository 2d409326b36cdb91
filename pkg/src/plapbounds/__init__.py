"""Certified bounds for extremal parameters of ``-Delta_p u = lambda f(u)``."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DomainError,
    NoSolutionAtThisHeight,
    PlapError,
    SpecError,
    UnsupportedGeometry,
)
from .geometry import Ball, Measured, parse_geometry  # noqa: E402
from .nonlinearity import Nonlinearity, PSetting, parse_nonlinearity  # noqa: E402

__all__ = [
    "Ball",
    "ConvergenceError",
    "DomainError",
    "Measured",
    "NoSolutionAtThisHeight",
    "Nonlinearity",
    "PSetting",
    "PlapError",
    "SpecError",
    "UnsupportedGeometry",
    "parse_geometry",
    "parse_nonlinearity",
]
