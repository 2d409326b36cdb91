"""Nonexistence thresholds for ``-Delta_p u >= lambda rho(x) f(u)`` and the
pull-in voltage sandwich for the MEMS model ``f(u) = (1-u)^-2``, ``p = 2``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import scan_max
from .errors import DomainError
from .nonlinearity import F_infinity_norm, Nonlinearity, PSetting
from .pointwise import WeightKind, WeightSpec, rho_x

SRC_GENERAL = "pointwise distance bound maximized over the domain"
SRC_RADIAL = "exact weighted torsion for rho = |x|^alpha on B_R"
SRC_MEMS_LOWER = "quoted-literature MEMS lower bound (comparison value, not proved here)"


@dataclass(frozen=True)
class NonexistenceThreshold:
    lambda_bar: float
    source: str

    @property
    def meaning(self) -> str:
        return f"no positive supersolution exists for lambda > {self.lambda_bar:.12g}"


def _finite_F(nl: Nonlinearity, ps: PSetting) -> float:
    F_inf = F_infinity_norm(nl, ps)
    if math.isinf(F_inf):
        raise DomainError(f"{nl.label}: ||F||_inf is infinite, no finite threshold")
    return F_inf


def sup_weighted_distance(ps: PSetting, w: WeightSpec) -> float:
    """``sup_x rho_x(d(x)) d(x)^p`` over the ball."""
    R, p = w.R, ps.p
    if w.kind is WeightKind.CONSTANT:
        return w.value * R**p

    def objective(t):
        d = R - t
        return rho_x(w, t, d) * d**p

    _, v = scan_max(objective, np.linspace(0.0, R, 201), xtol=1e-13)
    return v


def threshold_general(nl: Nonlinearity, ps: PSetting, w: WeightSpec) -> NonexistenceThreshold:
    p, N = ps.p, ps.N
    F_inf = _finite_F(nl, ps)
    lam = (p / (p - 1.0)) ** (p - 1.0) * N * F_inf ** (p - 1.0) / sup_weighted_distance(ps, w)
    return NonexistenceThreshold(lam, SRC_GENERAL)


def threshold_radial_weight(
    nl: Nonlinearity, ps: PSetting, alpha_w: float, R: float = 1.0
) -> NonexistenceThreshold:
    if not (alpha_w > 0):
        raise DomainError(f"alpha_w must be > 0, got {alpha_w}")
    if not (R > 0):
        raise DomainError(f"R must be positive, got {R}")
    p, N = ps.p, ps.N
    F_inf = _finite_F(nl, ps)
    lam = ((alpha_w + p) / (p - 1.0) * F_inf) ** (p - 1.0) * (alpha_w + N) * R ** (-(alpha_w + p))
    return NonexistenceThreshold(lam, SRC_RADIAL)


@dataclass(frozen=True)
class MemsSandwich:
    lower: float
    upper: float
    lower_source: str = SRC_MEMS_LOWER

    def contains(self, value: float, rtol: float = 0.0) -> bool:
        return self.lower * (1 - rtol) <= value <= self.upper * (1 + rtol)


def mems_sandwich(alpha_w: float, N: float, R: float = 1.0) -> MemsSandwich:
    """Bounds on the pull-in voltage of ``-Delta u = lambda |x|^alpha / (1-u)^2`` on ``B_R``."""
    if alpha_w < 0:
        raise DomainError(f"alpha_w must be >= 0, got {alpha_w}")
    if N < 1 or R <= 0:
        raise DomainError(f"need N >= 1 and R > 0, got N={N}, R={R}")
    a = alpha_w
    scale = R ** (-(a + 2.0))
    lower = max(4.0 * (a + 2) * (a + N) / 27.0, (a + 2) * (3 * N + a - 4) / 9.0) * scale
    upper = (a + 2) * (a + N) / 3.0 * scale
    return MemsSandwich(lower, upper)
