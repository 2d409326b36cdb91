"""Domain geometry and p-torsion data.

Balls carry exact torsion functions. General domains are described only by
four scalar measurements (diameter, Chebyshev radius, volume, perimeter) and
get a two-sided estimate of the torsion maximum.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError, SpecError
from .nonlinearity import PSetting


@dataclass(frozen=True)
class Ball:
    R: float = 1.0

    def __post_init__(self):
        if not (self.R > 0) or not math.isfinite(self.R):
            raise DomainError(f"ball radius must be positive, got {self.R}")

    @property
    def spec(self) -> str:
        return f"ball:R={self.R:g}"


@dataclass(frozen=True)
class Measured:
    """A general domain known only through scalar measurements."""

    diameter: float
    chebyshev_radius: float
    volume: float
    perimeter: float

    def __post_init__(self):
        for name in ("diameter", "chebyshev_radius", "volume", "perimeter"):
            val = getattr(self, name)
            if not (val > 0) or not math.isfinite(val):
                raise DomainError(f"{name} must be positive, got {val}")
        if self.chebyshev_radius > self.diameter / 2.0 * (1 + 1e-12):
            raise DomainError("Chebyshev radius cannot exceed half the diameter")

    @property
    def spec(self) -> str:
        return (
            f"measured:diam={self.diameter:g},cheb={self.chebyshev_radius:g},"
            f"vol={self.volume:g},per={self.perimeter:g}"
        )


DomainGeometry = Ball | Measured

GRAMMAR = '"ball:R=<real>", "measured:diam=<r>,cheb=<r>,vol=<r>,per=<r>"'
_NUM = r"([-+0-9.eE]+)"
_BALL_RE = re.compile(rf"^ball:r={_NUM}$")
_MEAS_RE = re.compile(rf"^measured:diam={_NUM},cheb={_NUM},vol={_NUM},per={_NUM}$")


def parse_geometry(spec: str) -> DomainGeometry:
    text = spec.strip().lower().replace(" ", "")
    try:
        if m := _BALL_RE.match(text):
            return Ball(float(m.group(1)))
        if m := _MEAS_RE.match(text):
            return Measured(*(float(g) for g in m.groups()))
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise SpecError(f"bad number in geometry spec {spec!r}; expected {GRAMMAR}") from None
    raise SpecError(f"bad geometry spec {spec!r}; expected one of {GRAMMAR}")


@dataclass(frozen=True)
class TorsionEstimate:
    lower: float
    upper: float
    exact: bool = False

    def __post_init__(self):
        if self.lower > self.upper * (1 + 1e-12):
            raise DomainError(f"torsion estimate with lower {self.lower} > upper {self.upper}")


def _ball_profile(ps: PSetting, R: float, r: float) -> float:
    q = ps.q
    return (ps.p - 1.0) / ps.p * ps.N ** (-1.0 / (ps.p - 1.0)) * (R**q - r**q)


def torsion_ball(ps: PSetting, R: float, r: float) -> float:
    """Torsion function of the ball ``B_R`` at radius ``r``."""
    if not (R > 0):
        raise DomainError(f"R must be positive, got {R}")
    if r < 0 or r > R:
        raise DomainError(f"radius {r} outside [0, {R}]")
    return _ball_profile(ps, R, r)


def auxiliary_w(ps: PSetting, d: float, s: float) -> float:
    """Torsion of the ball of radius ``d`` at distance ``s`` from its center,
    used to bound the weighted torsion from below inside an inscribed ball."""
    if not (d > 0):
        raise DomainError(f"d must be positive, got {d}")
    if s < 0 or s > d:
        raise DomainError(f"distance {s} outside [0, {d}]")
    return _ball_profile(ps, d, s)


def torsion_max_estimate(geom: DomainGeometry, ps: PSetting) -> TorsionEstimate:
    """Two-sided bounds on ``psi_M``, the maximum of the p-torsion function.

    Inscribed and circumscribed balls give the Chebyshev-radius and diameter
    bounds; the torsional-rigidity inequality ``tau_p >= (p-1)/(2p-1)
    |Omega|^((2p-1)/(p-1)) / P^(p/(p-1))`` combined with ``tau_p <= psi_M
    |Omega|`` gives a second lower bound.
    """
    if isinstance(geom, Ball):
        val = _ball_profile(ps, geom.R, 0.0)
        return TorsionEstimate(val, val, exact=True)
    p = ps.p
    cheb = _ball_profile(ps, geom.chebyshev_radius, 0.0)
    rigidity = (p - 1.0) / (2.0 * p - 1.0) * (geom.volume / geom.perimeter) ** ps.q
    upper = _ball_profile(ps, geom.diameter / 2.0, 0.0)
    if rigidity > upper * (1 + 1e-12):
        raise DomainError(
            f"inconsistent measurements: volume/perimeter {geom.volume / geom.perimeter:g} "
            f"is too large for diameter {geom.diameter:g}"
        )
    return TorsionEstimate(max(cheb, rigidity), upper, exact=False)


def weighted_torsion_radial(ps: PSetting, R: float, alpha_w: float, r: float) -> float:
    """Solution of ``-Delta_p psi = |x|^alpha_w`` on ``B_R`` at radius ``r``.

    Only ``alpha_w > 0``; the unweighted case is :func:`torsion_ball`.
    """
    if not (alpha_w > 0):
        raise DomainError(f"alpha_w must be > 0 (use torsion_ball for alpha_w = 0), got {alpha_w}")
    if not (R > 0):
        raise DomainError(f"R must be positive, got {R}")
    if r < 0 or r > R:
        raise DomainError(f"radius {r} outside [0, {R}]")
    p, N = ps.p, ps.N
    e = (alpha_w + p) / (p - 1.0)
    C = (p - 1.0) / (alpha_w + p) * (alpha_w + N) ** (-1.0 / (p - 1.0))
    return C * (R**e - r**e)


def scale_to_radius(unit_value: float, p: float, R: float, alpha_w: float = 0.0) -> float:
    """Rescale an eigenvalue-type quantity from ``B_1`` to ``B_R``.

    ``lambda(B_R) = R^-(p+alpha_w) lambda(B_1)`` by the homogeneity of the
    p-Laplacian (the weight ``|x|^alpha_w`` contributes ``alpha_w``).
    """
    return unit_value * R ** (-(p + alpha_w))
