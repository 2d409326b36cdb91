"""Pointwise lower bounds for positive supersolutions on balls.

For a C^1 positive supersolution of ``-Delta_p u >= lambda rho(x) f(u)``,
``F(u(x))`` dominates ``lambda^(1/(p-1))`` times the weighted torsion
``psi_rho(x)``, which in turn dominates a distance-to-boundary expression.
When the required value of ``F`` reaches ``||F||_inf`` no supersolution can
exist; that outcome is returned as :class:`NoSupersolution`, not raised.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, SpecError
from .geometry import Ball, torsion_ball, weighted_torsion_radial
from .nonlinearity import F_infinity_norm, Nonlinearity, PSetting, big_F_inverse


class WeightKind(str, enum.Enum):
    CONSTANT = "constant"
    RADIAL_POWER = "radial_power"


@dataclass(frozen=True)
class WeightSpec:
    """``rho = c`` or ``rho = |x|^alpha_w`` on a ball."""

    kind: WeightKind
    value: float
    domain: Ball = Ball(1.0)

    def __post_init__(self):
        if not (self.value > 0):
            raise DomainError(f"weight parameter must be positive, got {self.value}")
        if not isinstance(self.domain, Ball):
            raise DomainError("pointwise bounds are implemented for balls only")

    @classmethod
    def constant(cls, c: float = 1.0, domain: Ball = Ball(1.0)) -> "WeightSpec":
        return cls(WeightKind.CONSTANT, float(c), domain)

    @classmethod
    def radial_power(cls, alpha_w: float, domain: Ball = Ball(1.0)) -> "WeightSpec":
        return cls(WeightKind.RADIAL_POWER, float(alpha_w), domain)

    @property
    def R(self) -> float:
        return self.domain.R

    @property
    def spec(self) -> str:
        if self.kind is WeightKind.CONSTANT:
            return f"const:c={self.value:g}"
        return f"power:alpha={self.value:g}"


def parse_weight(spec: str, domain: Ball) -> WeightSpec:
    text = spec.strip().lower()
    try:
        if text.startswith("const:c="):
            return WeightSpec.constant(float(text[8:]), domain)
        if text.startswith("power:alpha="):
            return WeightSpec.radial_power(float(text[12:]), domain)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
    raise SpecError(f'bad weight spec {spec!r}; expected "const:c=<real>" or "power:alpha=<real>"')


def rho_x(w: WeightSpec, x_norm: float, r: float) -> float:
    """Infimum of the weight over the ball of radius ``r`` around a point at ``|x| = x_norm``."""
    if x_norm < 0 or x_norm > w.R:
        raise DomainError(f"|x|={x_norm} outside the ball of radius {w.R}")
    if r < 0 or r > w.R - x_norm + 1e-15 * w.R:
        raise DomainError(f"r={r} exceeds the distance {w.R - x_norm} to the boundary")
    if w.kind is WeightKind.CONSTANT:
        return w.value
    return max(0.0, x_norm - r) ** w.value


def weighted_torsion(ps: PSetting, w: WeightSpec, x_norm: float) -> float:
    """``psi_rho`` at ``|x| = x_norm`` for the two supported weights."""
    if w.kind is WeightKind.CONSTANT:
        return w.value ** (1.0 / (ps.p - 1.0)) * torsion_ball(ps, w.R, x_norm)
    return weighted_torsion_radial(ps, w.R, w.value, x_norm)


@dataclass(frozen=True)
class NoSupersolution:
    """The required ``F(u(x))`` is not below ``||F||_inf``: no supersolution exists."""

    required_F: float
    F_infinity: float
    x_norm: float

    def __bool__(self):
        return False


def distance_bound(ps: PSetting, w: WeightSpec, lam: float, x_norm: float) -> float:
    """Lower bound on ``F(u(x))`` from the inscribed ball at ``x``."""
    p, N = ps.p, ps.N
    d = w.R - x_norm
    if d <= 0:
        return 0.0
    inner = rho_x(w, x_norm, d) * d**p / N
    return lam ** (1.0 / (p - 1.0)) * (p - 1.0) / p * inner ** (1.0 / (p - 1.0))


def torsion_bound(ps: PSetting, w: WeightSpec, lam: float, x_norm: float) -> float:
    """Lower bound on ``F(u(x))`` from the weighted torsion function."""
    return lam ** (1.0 / (ps.p - 1.0)) * weighted_torsion(ps, w, x_norm)


def pointwise_lower(
    nl: Nonlinearity, ps: PSetting, w: WeightSpec, lam: float, x_norm: float
) -> float | NoSupersolution:
    """Lower bound for ``u(x)`` at ``|x| = x_norm``, or :class:`NoSupersolution`."""
    if not (lam > 0):
        raise DomainError(f"lambda must be positive, got {lam}")
    if x_norm < 0 or x_norm > w.R:
        raise DomainError(f"|x|={x_norm} outside the ball of radius {w.R}")
    y = max(distance_bound(ps, w, lam, x_norm), torsion_bound(ps, w, lam, x_norm))
    if y == 0.0:
        return 0.0
    F_inf = F_infinity_norm(nl, ps)
    if y >= F_inf:
        return NoSupersolution(y, F_inf, x_norm)
    return big_F_inverse(nl, ps, y)


def pointwise_table(nl, ps, w, lam, radii) -> list[dict]:
    rows = []
    for r in radii:
        val = pointwise_lower(nl, ps, w, lam, float(r))
        if isinstance(val, NoSupersolution):
            rows.append({"r": float(r), "lower": math.nan, "F_required": val.required_F,
                         "status": "no-supersolution"})
        else:
            rows.append({"r": float(r), "lower": float(val),
                         "F_required": max(distance_bound(ps, w, lam, r),
                                           torsion_bound(ps, w, lam, r)),
                         "status": "ok"})
    return rows
