"""Admissible nonlinearities f and the scalar functionals built from them.

Every bound in the package consumes one of four numbers derived from f:

* ``F(t) = int_0^t f(s)^(-1/(p-1)) ds`` and its inverse,
* ``||F||_inf = F(a_f)``,
* ``alpha_{f,p} = sup_{0<t<a_f} t^(p-1) / f(t)``,
* the kernel supremum ``sup_{0<s<F^-1(a)} f'(s) f(s)^((2-p)/(p-1)) (a - F(s))``.

The three built-in families (exponential, Gelfand power ``(1+u)^m`` and MEMS
power ``(1-u)^(-m)``) use closed forms. ``Custom`` nonlinearities go through
quadrature and one-dimensional maximization.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from ._numerics import quad, safe_eval, scan_max
from .errors import ConvergenceError, DomainError, SpecError


class Kind(str, enum.Enum):
    EXP = "exp"
    GELFAND = "gelfand"
    MEMS = "mems"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PSetting:
    """The p-Laplacian exponent ``p > 1`` and the space dimension ``N >= 1``.

    ``N`` may be real: every formula is analytic in N and the radial ODE
    makes sense for fractional dimension.
    """

    p: float
    N: float

    def __post_init__(self):
        if not (self.p > 1.0) or not math.isfinite(self.p):
            raise DomainError(f"p must be a finite real > 1, got {self.p}")
        if not (self.N >= 1.0) or not math.isfinite(self.N):
            raise DomainError(f"N must be a finite real >= 1, got {self.N}")

    @property
    def q(self) -> float:
        """Conjugate exponent p/(p-1)."""
        return self.p / (self.p - 1.0)


@dataclass(frozen=True)
class Nonlinearity:
    """A nondecreasing C^1 function ``f: [0, a_f) -> (0, inf)``.

    Use the constructors :meth:`exp`, :meth:`gelfand`, :meth:`mems` and
    :meth:`custom` rather than building instances directly.
    """

    kind: Kind
    f: Callable[[float], float] = field(compare=False)
    f_prime: Callable[[float], float] = field(compare=False)
    a_f: float = math.inf
    m: float | None = None
    label: str = ""

    @classmethod
    def exp(cls) -> "Nonlinearity":
        return cls(Kind.EXP, math.exp, math.exp, math.inf, None, "exp")

    @classmethod
    def gelfand(cls, m: float) -> "Nonlinearity":
        """``f(u) = (1+u)^m``; bounds need ``m > p-1`` at the use site."""
        m = float(m)
        if not m > 0:
            raise DomainError(f"Gelfand power needs m > 0, got {m}")
        return cls(
            Kind.GELFAND,
            lambda t: (1.0 + t) ** m,
            lambda t: m * (1.0 + t) ** (m - 1.0),
            math.inf,
            m,
            f"gelfand:m={m:g}",
        )

    @classmethod
    def mems(cls, m: float) -> "Nonlinearity":
        """``f(u) = (1-u)^(-m)`` on ``[0, 1)``."""
        m = float(m)
        if not m > 0:
            raise DomainError(f"MEMS power needs m > 0, got {m}")
        return cls(
            Kind.MEMS,
            lambda t: (1.0 - t) ** (-m),
            lambda t: m * (1.0 - t) ** (-m - 1.0),
            1.0,
            m,
            f"mems:m={m:g}",
        )

    @classmethod
    def custom(cls, f, f_prime, a_f: float = math.inf, label: str = "custom") -> "Nonlinearity":
        """Wrap user callables. Both ``f`` and ``f'`` are required."""
        if not (a_f > 0):
            raise DomainError(f"a_f must be positive, got {a_f}")
        if not callable(f) or not callable(f_prime):
            raise DomainError("custom nonlinearity needs callables f and f_prime")
        return cls(Kind.CUSTOM, f, f_prime, float(a_f), None, label)

    @classmethod
    def constant(cls, c: float = 1.0) -> "Nonlinearity":
        """``f == c``; the right-hand side of the torsion problem when ``c = 1``."""
        return cls.custom(lambda t: c, lambda t: 0.0, math.inf, f"const:c={c:g}")

    def as_custom(self) -> "Nonlinearity":
        """Same function, but forcing the generic numerical code paths."""
        return Nonlinearity.custom(self.f, self.f_prime, self.a_f, f"custom({self.label})")

    def compose_power(self, q: float) -> "Nonlinearity":
        """``g(u) = f(u^q)`` as a custom nonlinearity.

        Raises :class:`DomainError` if ``g`` is not nondecreasing on a probe grid.
        """
        q = float(q)
        if not q > 0:
            raise DomainError(f"q must be positive, got {q}")
        if q == 1.0:
            base = self
            return Nonlinearity.custom(base.f, base.f_prime, base.a_f, f"{base.label}|q=1")
        f, fp = self.f, self.f_prime
        a_g = self.a_f ** (1.0 / q) if math.isfinite(self.a_f) else math.inf

        def g(u):
            return f(u**q)

        def g_prime(u):
            if u == 0.0:
                return 0.0 if q > 1.0 else math.inf
            return q * u ** (q - 1.0) * fp(u**q)

        top = min(a_g * (1 - 1e-9), 10.0) if math.isfinite(a_g) else 10.0
        for u in np.linspace(0.0, top, 201):
            if safe_eval(g_prime, u, 0.0) < 0.0:
                raise DomainError(f"f(u^{q:g}) is not nondecreasing near u={u:g}")
        return Nonlinearity.custom(g, g_prime, a_g, f"{self.label}|q={q:g}")

    @property
    def spec(self) -> str:
        return self.label

    @property
    def f0_positive(self) -> bool:
        """Whether ``f(0) > 0`` (needed by every sub/supersolution lower bound)."""
        return safe_eval(self.f, 0.0, 0.0) > 0.0

    def in_domain(self, t: float) -> bool:
        return 0.0 <= t < self.a_f

    def _check(self, t: float) -> None:
        if not self.in_domain(t):
            raise DomainError(f"t={t} outside the domain [0, {self.a_f}) of {self.label}")

    def __call__(self, t: float) -> float:
        self._check(t)
        return self.f(t)

    def derivative(self, t: float) -> float:
        self._check(t)
        return self.f_prime(t)


_SPEC_RE = re.compile(r"^(gelfand|mems):m=([-+0-9.eE]+)$")
GRAMMAR = '"exp", "gelfand:m=<real>", "mems:m=<real>"'


def parse_nonlinearity(spec: str) -> Nonlinearity:
    text = spec.strip().lower()
    if text == "exp":
        return Nonlinearity.exp()
    match = _SPEC_RE.match(text)
    if not match:
        raise SpecError(f"bad nonlinearity spec {spec!r}; expected one of {GRAMMAR}")
    try:
        m = float(match.group(2))
    except ValueError:
        raise SpecError(f"bad exponent in {spec!r}; expected one of {GRAMMAR}") from None
    return Nonlinearity.gelfand(m) if match.group(1) == "gelfand" else Nonlinearity.mems(m)


# ---------------------------------------------------------------------------
# F, F^-1 and ||F||_inf


def _gelfand_rate(nl: Nonlinearity, ps: PSetting) -> float:
    # exponent (m+1-p)/(p-1) of the algebraic tail of F
    return (nl.m + 1.0 - ps.p) / (ps.p - 1.0)


def _mems_rate(nl: Nonlinearity, ps: PSetting) -> float:
    return (nl.m + ps.p - 1.0) / (ps.p - 1.0)


def _integrand(nl: Nonlinearity, ps: PSetting):
    e = -1.0 / (ps.p - 1.0)

    def h(s):
        try:
            v = nl.f(s)
        except OverflowError:
            return 0.0
        if math.isinf(v):
            return 0.0
        return v**e

    return h


def F_infinity_norm(nl: Nonlinearity, ps: PSetting) -> float:
    """``||F||_inf``; returns ``math.inf`` when the improper integral diverges."""
    p = ps.p
    if nl.kind is Kind.EXP:
        return p - 1.0
    if nl.kind is Kind.GELFAND:
        rate = _gelfand_rate(nl, ps)
        return (p - 1.0) / (nl.m + 1.0 - p) if rate > 0 else math.inf
    if nl.kind is Kind.MEMS:
        return (p - 1.0) / (nl.m + p - 1.0)
    return _custom_F_inf(nl, ps)


def _custom_F_inf(nl: Nonlinearity, ps: PSetting) -> float:
    h = _integrand(nl, ps)
    if math.isfinite(nl.a_f):
        return quad(h, 0.0, nl.a_f)
    # tail test on decades: a non-decaying decade mass means divergence
    d5 = quad(h, 1e5, 1e6)
    d6 = quad(h, 1e6, 1e7)
    if d6 > 0.5 * d5 and d6 > 1e-12:
        return math.inf
    head = quad(h, 0.0, 1.0)
    try:
        tail = quad(h, 1.0, math.inf)
    except ConvergenceError:
        return math.inf
    return head + tail


def big_F(nl: Nonlinearity, ps: PSetting, t: float) -> float:
    """``F(t) = int_0^t f(s)^(-1/(p-1)) ds`` for ``0 <= t < a_f``."""
    t = float(t)
    nl._check(t)
    p = ps.p
    if t == 0.0:
        return 0.0
    if nl.kind is Kind.EXP:
        return -(p - 1.0) * math.expm1(-t / (p - 1.0))
    if nl.kind is Kind.GELFAND:
        rate = _gelfand_rate(nl, ps)
        if rate == 0.0:
            return (p - 1.0) * math.log1p(t)
        return -(p - 1.0) / (nl.m + 1.0 - p) * math.expm1(-rate * math.log1p(t))
    if nl.kind is Kind.MEMS:
        rate = _mems_rate(nl, ps)
        return -(p - 1.0) / (nl.m + p - 1.0) * math.expm1(rate * math.log1p(-t))
    return quad(_integrand(nl, ps), 0.0, t)


def big_F_inverse(nl: Nonlinearity, ps: PSetting, y: float) -> float:
    """Inverse of :func:`big_F` on ``[0, ||F||_inf)``.

    ``y`` equal to ``||F||_inf`` (to 1e-12 relative) is accepted when ``a_f``
    is finite and returns the largest float below ``a_f``.
    """
    y = float(y)
    F_inf = F_infinity_norm(nl, ps)
    if y < 0.0:
        raise DomainError(f"F^-1 needs y >= 0, got {y}")
    if y == 0.0:
        return 0.0
    top = math.nextafter(nl.a_f, 0.0) if math.isfinite(nl.a_f) else math.inf
    if y >= F_inf:
        if math.isfinite(nl.a_f) and y <= F_inf * (1.0 + 1e-12):
            return top
        raise DomainError(f"y={y} is not below ||F||_inf={F_inf}")
    p = ps.p
    if nl.kind is Kind.EXP:
        return -(p - 1.0) * math.log1p(-y / (p - 1.0))
    if nl.kind is Kind.GELFAND:
        rate = _gelfand_rate(nl, ps)
        return math.expm1(-math.log1p(-y / F_inf) / rate)
    if nl.kind is Kind.MEMS:
        rate = _mems_rate(nl, ps)
        return min(-math.expm1(math.log1p(-y / F_inf) / rate), top)
    return _custom_F_inverse(nl, ps, y)


def _custom_F_inverse(nl: Nonlinearity, ps: PSetting, y: float) -> float:
    h = _integrand(nl, ps)
    if math.isfinite(nl.a_f):
        hi = math.nextafter(nl.a_f, 0.0)
    else:
        hi = 1.0
        while big_F(nl, ps, hi) <= y:
            hi *= 2.0
            if hi > 1e300:
                raise ConvergenceError(f"could not bracket F^-1({y})")
    lo, F_lo = 0.0, 0.0
    # walk the bracket with cumulative integrals to keep each quad short
    grid = np.linspace(0.0, hi, 33)[1:]
    for x in grid:
        F_x = F_lo + quad(h, lo, x)
        if F_x >= y:
            hi = x
            break
        lo, F_lo = x, F_x

    def resid(t):
        return F_lo + quad(h, lo, t) - y

    t = optimize.brentq(resid, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    if abs(resid(t)) > 1e-12 * max(1.0, y):
        raise ConvergenceError(f"F^-1({y}) did not reach tolerance")
    return t


# ---------------------------------------------------------------------------
# alpha_{f,p} and the kernel supremum


def alpha_fp(nl: Nonlinearity, ps: PSetting) -> float:
    """``sup_{0<t<a_f} t^(p-1)/f(t)``; ``math.inf`` when unbounded."""
    p = ps.p
    if nl.kind is Kind.EXP:
        return ((p - 1.0) / math.e) ** (p - 1.0)
    if nl.kind is Kind.GELFAND:
        m = nl.m
        if m <= p - 1.0:
            return math.inf
        k = m + 1.0 - p
        return (p - 1.0) ** (p - 1.0) * math.exp(k * math.log(k) - m * math.log(m))
    if nl.kind is Kind.MEMS:
        m = nl.m
        k = m + p - 1.0
        return (p - 1.0) ** (p - 1.0) * math.exp(m * math.log(m) - (m + p - 1.0) * math.log(k))
    return _custom_alpha_fp(nl, ps)


def _custom_alpha_fp(nl: Nonlinearity, ps: PSetting) -> float:
    p = ps.p

    def log_ratio(x):
        # log of t^(p-1)/f(t) at t = e^x
        t = math.exp(x)
        if not nl.in_domain(t):
            return -math.inf
        v = nl.f(t)
        if math.isinf(v):
            return -math.inf
        return (p - 1.0) * x - math.log(v)

    if math.isfinite(nl.a_f):
        hi = math.log(nl.a_f) + math.log1p(-1e-12)
        lo = hi - 60.0
    else:
        lo, hi = -60.0, 60.0
    grid = np.linspace(lo, hi, 481)
    x, v = scan_max(log_ratio, grid, xtol=1e-13)
    if not math.isfinite(nl.a_f) and x >= grid[-2]:
        # still climbing at t = e^60: the ratio is unbounded
        if safe_eval(log_ratio, grid[-1]) > safe_eval(log_ratio, grid[-2]):
            return math.inf
    return math.exp(v)


def kernel_coefficient(nl: Nonlinearity, ps: PSetting) -> float | None:
    """``f'(0) f(0)^((2-p)/(p-1))`` for the built-ins, whose kernel peaks at 0."""
    if nl.kind is Kind.EXP:
        return 1.0
    if nl.kind in (Kind.GELFAND, Kind.MEMS):
        return nl.m
    return None


def sup_kernel(nl: Nonlinearity, ps: PSetting, alpha: float, *, _allow_edge: bool = False) -> float:
    """``sup_{0<s<F^-1(alpha)} f'(s) f(s)^((2-p)/(p-1)) (alpha - F(s))``."""
    alpha = float(alpha)
    F_inf = F_infinity_norm(nl, ps)
    if not (alpha > 0.0) or alpha > F_inf or (alpha == F_inf and not _allow_edge):
        raise DomainError(f"alpha={alpha} must lie in (0, ||F||_inf={F_inf})")
    coeff = kernel_coefficient(nl, ps)
    if coeff is not None:
        return coeff * alpha
    p = ps.p
    e = (2.0 - p) / (p - 1.0)
    s_max = big_F_inverse(nl, ps, alpha)

    def kernel(s):
        fs = nl.f(s)
        return nl.f_prime(s) * fs**e * (alpha - big_F(nl, ps, s))

    grid = np.union1d(np.linspace(0.0, s_max, 65), s_max * np.logspace(-8, 0, 33))
    grid = grid[grid < nl.a_f]
    _, v = scan_max(kernel, grid, xtol=1e-12)
    return max(v, 0.0)
