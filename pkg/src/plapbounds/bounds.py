"""Upper and lower bounds for the extremal parameter ``lambda*_p(f, Omega)``.

Conventions:

* Unit-ball quantities are computed once and rescaled centrally with
  :func:`~plapbounds.geometry.scale_to_radius`.
* For measured (non-ball) domains, upper bounds consume the torsion *lower*
  estimate and lower bounds the torsion *upper* estimate, so every emitted
  value stays a valid bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import scan_max
from .errors import DomainError
from .geometry import Ball, DomainGeometry, scale_to_radius, torsion_max_estimate
from .nonlinearity import (
    Kind,
    Nonlinearity,
    PSetting,
    F_infinity_norm,
    alpha_fp,
    kernel_coefficient,
    sup_kernel,
)
from .report import BoundEntry, BoundKind, BoundReport

SRC_TORSION_UPPER = "torsion-max upper bound ||F||_inf^(p-1) / psi_M^(p-1)"
SRC_BALL_LOWER = "sub/supersolution on the ball: max(scaled torsion, F^-1(alpha psi))"
SRC_SCALED_TORSION_LOWER = "sub/supersolution with scaled torsion: alpha_fp / psi_M^(p-1)"
SRC_EIGEN_UPPER = "eigenvalue-ratio upper bound lambda_1 * alpha_fp"
SRC_EIGEN_UPPER_CLASSICAL = "classical eigenvalue upper bound max(lambda_1, lambda_1 alpha_fp)"
SRC_CLOSED_FORM = "closed-form piecewise lower bound"


def _require_f0(nl: Nonlinearity) -> None:
    if not nl.f0_positive:
        raise DomainError(
            f"{nl.label}: lower bounds need f(0) > 0 so that 0 is a strict subsolution"
        )


def upper_torsion(nl: Nonlinearity, ps: PSetting, geom: DomainGeometry = Ball(1.0)) -> float:
    """``||F||_inf^(p-1) / psi_M^(p-1)``; ``inf`` when ``||F||_inf`` diverges."""
    F_inf = F_infinity_norm(nl, ps)
    if math.isinf(F_inf):
        return math.inf
    psi = torsion_max_estimate(geom, ps).lower
    return (F_inf / psi) ** (ps.p - 1.0)


def upper_eigen(
    nl: Nonlinearity, ps: PSetting, lambda1: float, lambda1_certified: bool = False
) -> BoundEntry:
    """``lambda* <= lambda_1 alpha_{f,p}``.

    The entry is certified only if ``lambda1`` itself is (an oracle value is not).
    """
    if not (lambda1 > 0):
        raise DomainError(f"lambda1 must be positive, got {lambda1}")
    a = alpha_fp(nl, ps)
    if math.isinf(a):
        raise DomainError(f"{nl.label}: t^(p-1)/f(t) is unbounded, no eigenvalue upper bound")
    return BoundEntry("eigen_ratio_upper", BoundKind.UPPER, lambda1 * a, SRC_EIGEN_UPPER,
                      bool(lambda1_certified))


def upper_eigen_classical(
    nl: Nonlinearity, ps: PSetting, lambda1: float, lambda1_certified: bool = False
) -> BoundEntry:
    """The weaker ``max(lambda_1, lambda_1 alpha_{f,p})``, kept for comparison."""
    base = upper_eigen(nl, ps, lambda1, lambda1_certified)
    return BoundEntry("classical_eigen_upper", BoundKind.UPPER, max(lambda1, base.value),
                      SRC_EIGEN_UPPER_CLASSICAL, base.certified)


# ---------------------------------------------------------------------------
# ball lower bound


def gamma_ball(nl: Nonlinearity, ps: PSetting, alpha: float) -> float:
    """``alpha^(p-1) (1 - p/((p-1)N) * sup_kernel(alpha))``."""
    p, N = ps.p, ps.N
    return alpha ** (p - 1.0) * (1.0 - p / ((p - 1.0) * N) * sup_kernel(nl, ps, alpha))


def _sup_gamma_linear(ps: PSetting, coeff: float, F_inf: float) -> tuple[float, float]:
    # kernel = coeff * alpha, so gamma(a) = a^(p-1) (1 - c a); gamma is
    # continuous up to ||F||_inf, whose limit value is a candidate
    p, N = ps.p, ps.N
    c = p * coeff / ((p - 1.0) * N)

    def g(a):
        return a ** (p - 1.0) * (1.0 - c * a)

    def dg(a):
        return (p - 1.0) * a ** (p - 2.0) - c * p * a ** (p - 1.0)

    def d2g(a):
        return (p - 1.0) * (p - 2.0) * a ** (p - 3.0) - c * p * (p - 1.0) * a ** (p - 2.0)

    top = F_inf if math.isfinite(F_inf) else (p - 1.0) / (p * c) * 4.0
    eps = 1e-9 * top
    grid = np.linspace(eps, top, 65)
    a, v = scan_max(g, grid, xtol=1e-13)
    # Newton polish on g' = 0 for interior maxima
    if eps < a < top:
        x = a
        for _ in range(30):
            h = d2g(x)
            if h >= 0:
                break
            step = dg(x) / h
            x_new = x - step
            if not (eps < x_new < top):
                break
            x = x_new
            if abs(step) <= 1e-15 * x:
                break
        if g(x) >= v:
            a, v = x, g(x)
    v_top = g(top)
    if v_top > v:
        a, v = top, v_top
    return a, v


def _sup_gamma_generic(nl: Nonlinearity, ps: PSetting, F_inf: float) -> tuple[float, float]:
    def g(a):
        return gamma_ball(nl, ps, a)

    if math.isfinite(F_inf):
        eps = 1e-9 * F_inf
        grid = np.linspace(eps, F_inf - eps, 25)
        return scan_max(g, grid, xtol=1e-8)
    # unbounded alpha range: extend until the optimum is interior
    top = 1.0
    for _ in range(60):
        grid = np.linspace(1e-9 * top, top, 25)
        a, v = scan_max(g, grid, xtol=1e-8)
        if a < grid[-2]:
            return a, v
        top *= 4.0
    return a, v


def sup_gamma(nl: Nonlinearity, ps: PSetting) -> tuple[float, float]:
    """Maximizer and value of ``gamma_ball`` over ``(0, ||F||_inf)``."""
    F_inf = F_infinity_norm(nl, ps)
    coeff = kernel_coefficient(nl, ps)
    if coeff is not None:
        return _sup_gamma_linear(ps, coeff, F_inf)
    return _sup_gamma_generic(nl, ps, F_inf)


@dataclass(frozen=True)
class BallLowerTerms:
    scaled_torsion: float
    sub_super: float
    alpha_star: float

    @property
    def value(self) -> float:
        return max(self.scaled_torsion, self.sub_super)


def ball_lower_terms(nl: Nonlinearity, ps: PSetting) -> BallLowerTerms:
    """Both terms of the unit-ball lower bound, before taking the max."""
    _require_f0(nl)
    p, N = ps.p, ps.N
    const = (p / (p - 1.0)) ** (p - 1.0) * N
    a_star, g_star = sup_gamma(nl, ps)
    return BallLowerTerms(const * alpha_fp(nl, ps), const * g_star, a_star)


def lower_ball(nl: Nonlinearity, ps: PSetting, R: float = 1.0) -> float:
    """Lower bound for ``lambda*`` on ``B_R`` (unit ball by default)."""
    return scale_to_radius(ball_lower_terms(nl, ps).value, ps.p, R)


def lower_general(nl: Nonlinearity, ps: PSetting, geom: DomainGeometry) -> float:
    """``alpha_{f,p} / psi_M^(p-1)`` with the conservative torsion estimate.

    For measured domains this is also the diameter form
    ``(p/(p-1))^(p-1) 2^p N / diam^p * alpha_{f,p}``; both are evaluated
    and the larger returned.
    """
    _require_f0(nl)
    p, N = ps.p, ps.N
    a = alpha_fp(nl, ps)
    psi_up = torsion_max_estimate(geom, ps).upper
    via_torsion = a / psi_up ** (p - 1.0)
    if isinstance(geom, Ball):
        return via_torsion
    via_diam = (p / (p - 1.0)) ** (p - 1.0) * 2.0**p * N / geom.diameter**p * a
    return max(via_torsion, via_diam)


# ---------------------------------------------------------------------------
# closed forms for the built-in families


@dataclass(frozen=True)
class ClosedFormBounds:
    lower: float
    upper: float
    branch: int
    thresholds: tuple[float, float]
    within_hypothesis: bool = True


def _piecewise(ps, first, middle, third, thr1, thr2, upper, R, within=True):
    N = ps.N
    if thr1 <= thr2:
        if N <= thr1:
            branch, val = 1, first
        elif N <= thr2:
            branch, val = 2, middle
        else:
            branch, val = 3, third
    else:
        # inverted thresholds (possible only outside the stated hypotheses)
        other = middle if N <= thr2 else third
        branch, val = (1, first) if first >= other else ((2 if N <= thr2 else 3), other)
    return ClosedFormBounds(
        scale_to_radius(val, ps.p, R), scale_to_radius(upper, ps.p, R), branch, (thr1, thr2), within
    )


def exp_thresholds(p: float) -> tuple[float, float]:
    return p ** ((2 * p - 1) / (p - 1)) / (math.e * (p - 1)), p * p / (p - 1)


def closed_form_exp(ps: PSetting, R: float = 1.0) -> ClosedFormBounds:
    """Piecewise lower bound and the torsion upper bound for ``f = e^u`` on ``B_R``."""
    p, N = ps.p, ps.N
    thr1, thr2 = exp_thresholds(p)
    first = (p / math.e) ** (p - 1) * N
    middle = ((p - 1) / p) ** (p - 1) * N**p / p
    third = p ** (p - 1) * (N - p)
    return _piecewise(ps, first, middle, third, thr1, thr2, N * p ** (p - 1), R)


def gelfand_thresholds(p: float, m: float) -> tuple[float, float]:
    k = m + 1 - p
    thr1 = p ** ((2 * p - 1) / (p - 1)) / (p - 1) * (k / m) ** (k / (p - 1))
    return thr1, m * p * p / ((p - 1) * k)


def closed_form_gelfand(ps: PSetting, m: float, R: float = 1.0) -> ClosedFormBounds:
    """Same for ``f = (1+u)^m``, ``m > p-1``."""
    p, N = ps.p, ps.N
    if not m > p - 1:
        raise DomainError(f"Gelfand power needs m > p-1 = {p - 1}, got {m}")
    k = m + 1 - p
    thr1, thr2 = gelfand_thresholds(p, m)
    # m^-m k^k in logs so that large m does not overflow
    first = N * p ** (p - 1) * math.exp(k * math.log(k) - m * math.log(m))
    middle = ((p - 1) / m) ** (p - 1) * (N / p) ** p
    third = (p / k) ** (p - 1) * (m * (N - p) - N * (p - 1)) / k
    upper = (p / k) ** (p - 1) * N
    return _piecewise(ps, first, middle, third, thr1, thr2, upper, R)


def mems_thresholds(p: float, m: float) -> tuple[float, float]:
    k = m + p - 1
    thr1 = p ** ((2 * p - 1) / (p - 1)) / (p - 1) * (m / k) ** (k / (p - 1))
    return thr1, m * p * p / ((p - 1) * k)


def closed_form_mems(ps: PSetting, m: float, R: float = 1.0) -> ClosedFormBounds:
    """Same for ``f = (1-u)^(-m)``.

    Any ``m > 0`` is accepted; ``within_hypothesis`` is False when ``m <= p-1``.
    The third branch is the limit of ``gamma`` at ``alpha = ||F||_inf``,
    ``(p/k)^(p-1) (N k - p m)/k`` with ``k = m+p-1``.
    """
    p, N = ps.p, ps.N
    if not m > 0:
        raise DomainError(f"MEMS power needs m > 0, got {m}")
    k = m + p - 1
    thr1, thr2 = mems_thresholds(p, m)
    first = N * p ** (p - 1) * math.exp(m * math.log(m) + (1 - m - p) * math.log(k))
    middle = ((p - 1) / m) ** (p - 1) * (N / p) ** p
    third = (p / k) ** (p - 1) * (N * k - p * m) / k
    upper = (p / k) ** (p - 1) * N
    return _piecewise(ps, first, middle, third, thr1, thr2, upper, R, within=m > p - 1)


def closed_form(nl: Nonlinearity, ps: PSetting, R: float = 1.0) -> ClosedFormBounds:
    if nl.kind is Kind.EXP:
        return closed_form_exp(ps, R)
    if nl.kind is Kind.GELFAND:
        return closed_form_gelfand(ps, nl.m, R)
    if nl.kind is Kind.MEMS:
        return closed_form_mems(ps, nl.m, R)
    raise DomainError(f"no closed form for {nl.label}")


# ---------------------------------------------------------------------------
# q -> infinity study


@dataclass(frozen=True)
class QLimitPoint:
    q: float
    lower: float
    upper: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def q_limit_target(ps: PSetting) -> float:
    """Limit of both bounds on the unit ball as q grows, for ``f(0) = 1``."""
    return (ps.p / (ps.p - 1.0)) ** (ps.p - 1.0) * ps.N


def q_limit_study(nl: Nonlinearity, ps: PSetting, q_list) -> list[QLimitPoint]:
    """Unit-ball bounds for ``g(u) = f(u^q)`` at each ``q`` in ``q_list``."""
    if abs(nl.f(0.0) - 1.0) > 1e-12:
        raise DomainError(f"q-limit study needs f(0) = 1, got f(0) = {nl.f(0.0)}")
    out = []
    for q in q_list:
        if not q >= 1:
            raise DomainError(f"q must be >= 1, got {q}")
        g = nl.compose_power(q)
        out.append(QLimitPoint(float(q), lower_ball(g, ps), upper_torsion(g, ps, Ball(1.0))))
    return out


# ---------------------------------------------------------------------------
# report assembly


def bound_report(
    nl: Nonlinearity,
    ps: PSetting,
    geom: DomainGeometry = Ball(1.0),
    lambda1: float | None = None,
    lambda1_certified: bool = False,
) -> BoundReport:
    """Every applicable bound for ``lambda*_p(f, geom)`` in one report."""
    report = BoundReport(
        problem={"nonlinearity": nl.spec, "p": ps.p, "N": ps.N, "geometry": geom.spec}
    )
    report.add(BoundEntry("torsion_upper", BoundKind.UPPER, upper_torsion(nl, ps, geom),
                          SRC_TORSION_UPPER))
    if nl.f0_positive:
        report.add(BoundEntry("scaled_torsion_lower", BoundKind.LOWER,
                              lower_general(nl, ps, geom), SRC_SCALED_TORSION_LOWER))
        if isinstance(geom, Ball):
            report.add(BoundEntry("ball_lower", BoundKind.LOWER, lower_ball(nl, ps, geom.R),
                                  SRC_BALL_LOWER))
            if nl.kind is not Kind.CUSTOM:
                try:
                    cf = closed_form(nl, ps, geom.R)
                except DomainError:
                    cf = None
                if cf is not None:
                    report.add(BoundEntry("closed_form_lower", BoundKind.LOWER, cf.lower,
                                          f"{SRC_CLOSED_FORM} (branch {cf.branch})"))
    if lambda1 is not None:
        report.add(upper_eigen(nl, ps, lambda1, lambda1_certified))
        report.add(upper_eigen_classical(nl, ps, lambda1, lambda1_certified))
    return report
