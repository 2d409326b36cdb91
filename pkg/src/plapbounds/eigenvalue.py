"""Lower bounds for the first Dirichlet eigenvalue of the p-Laplacian."""

from __future__ import annotations

import math

from .bounds import exp_thresholds
from .errors import UnsupportedGeometry
from .geometry import Ball, DomainGeometry, scale_to_radius, torsion_max_estimate
from .nonlinearity import PSetting
from .report import BoundEntry, BoundKind, EigenBoundReport

SRC_CHEEGER = "Cheeger inequality with h(B_R) = N/R"
SRC_TORSION = "reciprocal torsion maximum 1/psi_M^(p-1)"
SRC_PIECEWISE = "exponential extremal-parameter bound divided by alpha_fp(exp)"
SRC_NP = "literature comparison value N p"

# lim_{p->inf} lambda_1^(1/p) = 1/r_Omega; informational only, never a bound
P_INFINITY_NOTE = "as p -> inf, lambda_1^(1/p) tends to 1/(Chebyshev radius)"


def _ball(geom: DomainGeometry, what: str) -> Ball:
    if not isinstance(geom, Ball):
        raise UnsupportedGeometry(f"{what} is only available for balls")
    return geom


def cheeger_lower(geom: DomainGeometry, ps: PSetting) -> float:
    """``(h/p)^p`` with ``h(B_R) = N/R``. Balls only."""
    ball = _ball(geom, "the Cheeger bound")
    return (ps.N / (ps.p * ball.R)) ** ps.p


def torsion_reciprocal_lower(geom: DomainGeometry, ps: PSetting) -> float:
    """``1/psi_M^(p-1)``; measured domains use the diameter (upper) estimate of psi_M."""
    p = ps.p
    if isinstance(geom, Ball):
        return (p / (p - 1.0)) ** (p - 1.0) * ps.N / geom.R**p
    psi_up = torsion_max_estimate(geom, ps).upper
    return psi_up ** (-(p - 1.0))


def piecewise_branch(ps: PSetting) -> int:
    thr1, thr2 = exp_thresholds(ps.p)
    if ps.N <= thr1:
        return 1
    return 2 if ps.N <= thr2 else 3


def piecewise_lower_ball(ps: PSetting, R: float = 1.0) -> float:
    p, N = ps.p, ps.N
    branch = piecewise_branch(ps)
    if branch == 1:
        val = (p / (p - 1.0)) ** (p - 1.0) * N
    elif branch == 2:
        val = (math.e / p) ** (p - 1.0) * N**p / p
    else:
        val = (p * math.e / (p - 1.0)) ** (p - 1.0) * (N - p)
    return scale_to_radius(val, p, R)


def np_comparison(ps: PSetting, R: float = 1.0) -> float:
    return scale_to_radius(ps.N * ps.p, ps.p, R)


def best_lower(geom: DomainGeometry, ps: PSetting) -> EigenBoundReport:
    """Evaluate every applicable lower bound; ``report.best`` is the winner."""
    report = EigenBoundReport(problem={"p": ps.p, "N": ps.N, "geometry": geom.spec})
    # ties resolve to the earliest entry, so the sharper families come first
    if isinstance(geom, Ball):
        report.add(BoundEntry("piecewise", BoundKind.LOWER, piecewise_lower_ball(ps, geom.R),
                              f"{SRC_PIECEWISE} (branch {piecewise_branch(ps)})"))
        report.add(BoundEntry("np_comparison", BoundKind.LOWER, np_comparison(ps, geom.R),
                              SRC_NP))
    report.add(BoundEntry("torsion_reciprocal", BoundKind.LOWER,
                          torsion_reciprocal_lower(geom, ps), SRC_TORSION))
    if isinstance(geom, Ball):
        report.add(BoundEntry("cheeger", BoundKind.LOWER, cheeger_lower(geom, ps), SRC_CHEEGER))
    return report
