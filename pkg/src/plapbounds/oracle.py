"""Radial shooting oracle on balls.

Radial solutions of ``-Delta_p u = lambda r^alpha f(u)`` satisfy

    -(r^(N-1) |u'|^(p-2) u')' = lambda r^(N-1+alpha) f(u),  u'(0) = 0.

The ODE is integrated in ``t = ln r`` with state ``(u, w)``, where
``w = r^(N-1) |u'|^(p-2) u' / r^(N+alpha)`` is the flux divided by its
leading power. In these variables

    du/dt = sign(w) |w|^(1/(p-1)) e^(t (alpha+p)/(p-1))
    dw/dt = -lambda f(u) - (N + alpha) w

which is regular as ``t -> -inf`` (``w -> -lambda f(u0)/(N+alpha)``), so the
start uses the two-term series ``u ~ u0 - c r^((alpha+p)/(p-1))`` at a tiny
radius. Working in ``ln r`` also resolves the very thin boundary layers of
solutions with a large center value.

``lambda(u0)`` comes from homogeneity: integrate once with ``lambda = 1``
until the first zero ``s0``; then ``u(r) = U(r s0 / R)`` solves the problem on
``B_R`` with ``lambda = (s0/R)^(p+alpha)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.integrate import solve_ivp

from ._numerics import golden_max
from .errors import ConvergenceError, DomainError, NoSolutionAtThisHeight
from .geometry import scale_to_radius
from .nonlinearity import F_infinity_norm, Nonlinearity, PSetting, big_F_inverse

SERIES_SMALLNESS = 1e-9
MEMS_EDGE = 1e-6


@dataclass
class RadialSolution:
    """A sampled radial profile ``(r_i, u_i, u'_i)``."""

    lam: float
    u0: float
    r: np.ndarray
    u: np.ndarray
    du: np.ndarray
    boundary_residual: float
    converged: bool
    p: float
    N: float
    R: float
    alpha_w: float = 0.0
    breakdown_radius: float | None = None

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.r.tolist(), self.u.tolist(), self.du.tolist()))

    @classmethod
    def from_function(cls, ps: PSetting, u, du, R: float = 1.0, n_samples: int = 401,
                      lam: float = math.nan) -> "RadialSolution":
        """Sample an analytic profile, e.g. to feed :func:`kato_inequality_check`."""
        r = np.linspace(0.0, R, n_samples)
        uu = np.array([u(x) for x in r], dtype=float)
        dd = np.array([du(x) for x in r], dtype=float)
        res = float(uu[-1])
        return cls(lam, float(uu[0]), r, uu, dd, res, abs(res) <= 1e-9 * max(1.0, abs(uu[0])),
                   ps.p, ps.N, R)


@dataclass
class BifurcationCurve:
    """Points ``(u0, lambda(u0))`` of the radial solution branch and its maximum."""

    u0: np.ndarray
    lam: np.ndarray
    lambda_star_numeric: float
    turning_u0: float
    at_grid_end: bool = False
    unbounded: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.u0.tolist(), self.lam.tolist()))


# ---------------------------------------------------------------------------
# core integrator


class _Problem:
    """Right-hand side in the (ln r, u, w) variables for one (p, N, alpha, f)."""

    def __init__(self, p, N, alpha_w, f, f_log_slope, top=math.inf):
        self.p = p
        self.k = N + alpha_w
        self.qa = (alpha_w + p) / (p - 1.0)
        self.inv = 1.0 / (p - 1.0)
        self.alpha_w = alpha_w
        self.f = f
        self.f_log_slope = f_log_slope
        self.top = top

    def rhs(self, lam):
        f, k, qa, inv, top = self.f, self.k, self.qa, self.inv, self.top
        hi = math.nextafter(top, 0.0) if math.isfinite(top) else math.inf

        def fun(t, y):
            U, w = y
            Uc = min(U, hi) if U > 0.0 else 0.0
            dU = math.copysign(abs(w) ** inv, w) * math.exp(qa * t)
            return (dU, -lam * f(Uc) - k * w)

        return fun

    def start(self, lam, u0, cap=None):
        """Series start ``(eps, U, w, c)``."""
        f0 = self.f(u0)
        c = (self.p - 1.0) / (self.alpha_w + self.p) * (lam * f0 / self.k) ** self.inv
        slope = self.f_log_slope(u0)
        u_scale = abs(u0) if u0 != 0.0 else 1.0
        if slope > 0.0:
            u_scale = min(u_scale, 1.0 / slope)
        if c > 0.0:
            eps = (SERIES_SMALLNESS * u_scale / c) ** (1.0 / self.qa)
        else:
            eps = 1e-6
        if cap is not None:
            eps = min(eps, cap)
        return eps, u0 - c * eps**self.qa, -lam * f0 / self.k, c

    def du_from_w(self, r, w):
        return np.copysign(np.abs(w) ** self.inv, w) * r ** ((self.alpha_w + 1.0) / (self.p - 1.0))


def _problem_for(ps: PSetting, nl: Nonlinearity, alpha_w: float) -> _Problem:
    f, fp = nl.f, nl.f_prime

    def slope(u):
        try:
            return fp(u) / f(u)
        except (ZeroDivisionError, OverflowError):
            return 0.0

    return _Problem(ps.p, ps.N, alpha_w, f, slope, nl.a_f)


def _eigen_problem(ps: PSetting) -> _Problem:
    p = ps.p
    return _Problem(
        p, ps.N, 0.0,
        lambda u: math.copysign(abs(u) ** (p - 1.0), u),
        lambda u: (p - 1.0) / u if u > 0 else 0.0,
    )


def _first_zero(prob: _Problem, u0: float, rtol: float) -> float:
    """Radius of the first zero of the ``lambda = 1`` solution with ``U(0) = u0``."""
    eps, U, w, c = prob.start(1.0, u0)
    t = math.log(eps)
    # f(U) <= f(u0) on the way down, so the zero lies beyond the radius
    # where the constant-f(u0) profile hits zero
    t_end = math.log((u0 / c) ** (1.0 / prob.qa)) + 2.0 if c > 0 else t + 10.0
    t_end = max(t_end, t + 1.0)
    fun = prob.rhs(1.0)

    def hit_zero(t, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1
    y = [U, w]
    atol = [1e-15 * max(1.0, abs(u0)), 1e-300]
    for _ in range(80):
        sol = solve_ivp(fun, (t, t_end), y, method="DOP853", rtol=rtol, atol=atol,
                        events=hit_zero)
        if sol.status == -1:
            raise ConvergenceError(f"radial integration failed at u0={u0}: {sol.message}")
        if sol.t_events[0].size:
            return math.exp(float(sol.t_events[0][0]))
        t, y = float(sol.t[-1]), sol.y[:, -1]
        t_end = t + 5.0
    raise NoSolutionAtThisHeight(f"no zero of the radial profile found for u0={u0}")


def _check_u0(nl: Nonlinearity, u0: float) -> None:
    if not (0.0 < u0 < nl.a_f):
        raise DomainError(f"u0={u0} must lie in (0, {nl.a_f})")


# ---------------------------------------------------------------------------
# public operations


def shoot(
    ps: PSetting,
    rhs: Nonlinearity,
    lam: float,
    u0: float,
    R: float = 1.0,
    alpha_w: float = 0.0,
    n_samples: int = 201,
    rtol: float = 1e-12,
) -> RadialSolution:
    """Integrate outward from the center value ``u0`` to ``r = R``.

    If the profile drops below zero before ``R`` the result carries the
    ``breakdown_radius`` and is not converged.
    """
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    if not (0.0 <= u0 < rhs.a_f):
        raise DomainError(f"u0={u0} must lie in [0, {rhs.a_f})")
    r = np.linspace(0.0, R, n_samples)
    tol_u = 1e-9 * max(1.0, abs(u0))
    if lam == 0.0:
        u = np.full_like(r, u0)
        return RadialSolution(0.0, u0, r, u, np.zeros_like(r), u0, abs(u0) <= tol_u,
                              ps.p, ps.N, R, alpha_w)
    prob = _problem_for(ps, rhs, alpha_w)
    eps, U, w, c = prob.start(lam, u0, cap=1e-6 * R)

    def below_zero(t, y):
        return y[0] + tol_u

    below_zero.terminal = True
    below_zero.direction = -1
    sol = solve_ivp(prob.rhs(lam), (math.log(eps), math.log(R)), [U, w], method="DOP853",
                    rtol=rtol, atol=[1e-15 * max(1.0, abs(u0)), 1e-300], events=below_zero,
                    dense_output=True)
    if sol.status == -1:
        raise ConvergenceError(f"radial integration failed: {sol.message}")
    breakdown = math.exp(float(sol.t_events[0][0])) if sol.t_events[0].size else None
    r_end = breakdown if breakdown is not None else R
    r = r[r <= r_end]
    u = np.empty_like(r)
    du = np.empty_like(r)
    inner = r < eps
    u[inner] = u0 - c * r[inner] ** prob.qa
    du[inner] = -prob.qa * c * r[inner] ** (prob.qa - 1.0)
    outer = ~inner
    if outer.any():
        Y = sol.sol(np.log(r[outer]))
        u[outer] = Y[0]
        du[outer] = prob.du_from_w(r[outer], Y[1])
    if breakdown is not None:
        return RadialSolution(lam, u0, r, u, du, math.nan, False, ps.p, ps.N, R, alpha_w,
                              breakdown)
    residual = float(sol.y[0, -1])
    u[-1] = residual
    return RadialSolution(lam, u0, r, u, du, residual, abs(residual) <= tol_u,
                          ps.p, ps.N, R, alpha_w)


def lambda_of_u0(
    ps: PSetting, nl: Nonlinearity, u0: float, R: float = 1.0, alpha_w: float = 0.0,
    rtol: float = 1e-11,
) -> float:
    """The ``lambda`` for which the radial solution with center value ``u0``
    vanishes at ``r = R``."""
    _check_u0(nl, u0)
    s0 = _first_zero(_problem_for(ps, nl, alpha_w), u0, rtol)
    return scale_to_radius(s0 ** (ps.p + alpha_w), ps.p, R, alpha_w)


def u0_grid(nl: Nonlinearity, ps: PSetting, n_low: int = 16, n_high: int = 40) -> np.ndarray:
    """Center values spread evenly in ``F(u0)``, crowding toward ``||F||_inf``."""
    F_inf = F_infinity_norm(nl, ps)
    if math.isinf(F_inf):
        return np.geomspace(1e-4, 1e6, n_low + n_high)
    frac = np.concatenate([np.geomspace(1e-4, 0.5, n_low, endpoint=False),
                           1.0 - np.geomspace(0.5, 1e-14, n_high)])
    u0 = np.array([big_F_inverse(nl, ps, x * F_inf) for x in frac])
    if math.isfinite(nl.a_f):
        u0 = np.minimum(u0, nl.a_f - MEMS_EDGE * nl.a_f)
    return np.unique(u0[u0 > 0])


def lambda_star_numeric(
    ps: PSetting, nl: Nonlinearity, R: float = 1.0, tol: float = 1e-4, alpha_w: float = 0.0,
) -> BifurcationCurve:
    """Numerical extremal parameter: the maximum of ``lambda(u0)`` on the branch.

    When ``lambda(u0)`` is still increasing at the end of the grid (the
    singular-extremal regime) the last value is reported and
    ``at_grid_end`` is set; if it is still growing appreciably and
    ``||F||_inf`` is infinite, ``unbounded`` is set and the value is ``inf``.
    """
    rtol = min(1e-10, tol * 1e-4)
    prob = _problem_for(ps, nl, alpha_w)

    def lam_unit(u0):
        return _first_zero(prob, u0, rtol) ** (ps.p + alpha_w)

    grid = u0_grid(nl, ps)
    lams = np.array([lam_unit(u) for u in grid])
    i = int(np.argmax(lams))
    n = len(grid)
    at_end = i == n - 1
    unbounded = False
    if at_end:
        u_star, l_star = grid[-1], lams[-1]
        if math.isinf(F_infinity_norm(nl, ps)) and lams[-1] > lams[-6] * (1 + 1e-3):
            unbounded, l_star = True, math.inf
    else:
        lo, hi = grid[max(i - 1, 0)], grid[i + 1]
        u_star, l_star = golden_max(lam_unit, lo, hi, xtol=1e-9)
        if lams[i] > l_star:
            u_star, l_star = grid[i], lams[i]
        else:
            # keep the refined turning point on the curve
            j = int(np.searchsorted(grid, u_star))
            grid, lams = np.insert(grid, j, u_star), np.insert(lams, j, l_star)
    scale = scale_to_radius(1.0, ps.p, R, alpha_w)
    return BifurcationCurve(grid, lams * scale, l_star * scale, float(u_star), at_end, unbounded)


def minimal_solution(
    ps: PSetting, nl: Nonlinearity, lam: float, R: float = 1.0, alpha_w: float = 0.0,
    n_samples: int = 401,
) -> RadialSolution:
    """Minimal (smallest) radial solution at ``lam``, sampled on ``[0, R]``."""
    if not (lam > 0):
        raise DomainError(f"lambda must be positive, got {lam}")
    prob = _problem_for(ps, nl, alpha_w)
    scale = scale_to_radius(1.0, ps.p, R, alpha_w)

    def excess(u0):
        return _first_zero(prob, u0, 1e-12) ** (ps.p + alpha_w) * scale - lam

    prev_u = 0.0
    for u0 in u0_grid(nl, ps):
        e = excess(u0)
        if e >= 0.0:
            if prev_u == 0.0:
                prev_u = u0 * 1e-6
            u_root = optimize.brentq(excess, prev_u, u0, xtol=1e-15, rtol=1e-14, maxiter=200)
            return shoot(ps, nl, lam, u_root, R, alpha_w, n_samples)
        prev_u = u0
    raise DomainError(f"lambda={lam} exceeds the numerical extremal value; no minimal solution")


def lambda1_numeric(ps: PSetting, R: float = 1.0, tol: float = 1e-8) -> float:
    """First Dirichlet eigenvalue of ``-Delta_p`` on ``B_R`` by shooting."""
    rtol = max(min(1e-11, tol * 1e-3), 2.5e-14)
    s0 = _first_zero(_eigen_problem(ps), 1.0, rtol)
    return scale_to_radius(s0**ps.p, ps.p, R)


def torsion_numeric(
    ps: PSetting, R: float = 1.0, alpha_w: float = 0.0, n_samples: int = 101, rtol: float = 1e-12,
) -> tuple[np.ndarray, np.ndarray]:
    """Numerical (weighted) torsion function on ``B_R`` as ``(r, psi)``."""
    prob = _problem_for(ps, Nonlinearity.constant(1.0), alpha_w)
    eps, U, w, c = prob.start(1.0, 0.0, cap=1e-6 * R)
    sol = solve_ivp(prob.rhs(1.0), (math.log(eps), math.log(R)), [U, w], method="DOP853",
                    rtol=rtol, atol=[1e-16, 1e-300], dense_output=True)
    r = np.linspace(0.0, R, n_samples)
    U_of_r = np.where(r < eps, -c * r**prob.qa, 0.0)
    outer = r >= eps
    U_of_r[outer] = sol.sol(np.log(r[outer]))[0]
    U_R = float(sol.y[0, -1])
    psi = U_of_r - U_R
    psi[-1] = 0.0
    return r, psi


# ---------------------------------------------------------------------------
# Kato-type inequality spot check


@dataclass
class KatoReport:
    r: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    slack: float
    passed: bool

    @property
    def min_margin(self) -> float:
        return float(np.min(self.lhs - self.rhs))


def _minus_plap(r, du, N, p, factor=1.0):
    flux = r ** (N - 1.0) * factor * np.abs(du) ** (p - 2.0) * du
    return -np.gradient(flux, r) / r ** (N - 1.0)


def kato_inequality_check(
    ps: PSetting, nl: Nonlinearity, profile: RadialSolution, slack: float = 1e-4,
    exclude: float = 0.05,
) -> KatoReport:
    """Check ``-Delta_p G(u) >= G'(u)^(p-1) (-Delta_p u)`` with ``G = F``.

    Both sides come from finite differences of the radial fluxes; radii below
    ``exclude * R`` are skipped. Passes when ``lhs >= rhs - slack * max|rhs|``.
    """
    p, N = ps.p, ps.N
    r, u, du = profile.r, profile.u, profile.du
    if np.any(u[:-1] <= 0) or np.any(u >= nl.a_f):
        # the boundary sample may be 0; interior values must be in (0, a_f)
        if np.any(u[:-1] <= 0):
            raise DomainError("profile must stay positive inside the ball")
        raise DomainError("profile leaves the domain of f")
    keep = r > 0
    r, u, du = r[keep], u[keep], du[keep]
    g_prime = np.array([nl.f(max(x, 0.0)) ** (-1.0 / (p - 1.0)) for x in u])
    # flux of G(u) is G'(u)^(p-1) times the flux of u
    lhs = _minus_plap(r, du, N, p, g_prime ** (p - 1.0))
    rhs = g_prime ** (p - 1.0) * _minus_plap(r, du, N, p)
    band = r >= exclude * profile.R
    # one-sided differences at the ends are first order only
    band[-1] = False
    lhs, rhs, rr = lhs[band], rhs[band], r[band]
    scale = float(np.max(np.abs(rhs))) if rhs.size else 1.0
    passed = bool(np.all(lhs >= rhs - slack * scale))
    return KatoReport(rr, lhs, rhs, slack * scale, passed)

