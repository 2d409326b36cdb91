"""Consistency suites: certified bounds against the radial oracle.

Each suite returns one row per case with a ``passed`` flag; the CLI
``verify`` command and the test-suite both consume these rows.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import bounds, eigenvalue, oracle
from .errors import DomainError
from .geometry import Ball, torsion_ball, weighted_torsion_radial
from .nonlinearity import Nonlinearity, PSetting, alpha_fp

SANDWICH_FAMILIES = ("exp", "gelfand:m=3", "gelfand:m=5", "mems:m=2")
GRIDS = {
    "default": {
        "families": SANDWICH_FAMILIES,
        "p": (1.5, 2.0, 3.0),
        "N": (1, 2, 3, 5, 10),
        "torsion_p": (1.5, 2.0, 3.0, 4.0),
        "weights": (1.0, 2.0),
    },
    "quick": {
        "families": ("exp", "mems:m=2"),
        "p": (2.0,),
        "N": (1, 3, 10),
        "torsion_p": (2.0, 3.0),
        "weights": (1.0,),
    },
}
SUITES = ("sandwich", "eigen", "torsion", "closed-form")


def _grid(name: str) -> dict:
    try:
        return GRIDS[name]
    except KeyError:
        raise DomainError(f"unknown grid {name!r}; choose from {sorted(GRIDS)}") from None


def sandwich_case(nl: Nonlinearity, ps: PSetting, tol: float = 1e-4) -> dict:
    """``lower_ball <= lambda*_numeric <= upper_torsion`` up to the oracle tolerance.

    When ``t^(p-1)/f(t)`` is bounded the eigenvalue-ratio upper bound (with the
    numerical ``lambda_1``) is checked as well.
    """
    t0 = time.perf_counter()
    curve = oracle.lambda_star_numeric(ps, nl, 1.0, tol)
    lam = curve.lambda_star_numeric
    lo = bounds.lower_ball(nl, ps)
    up = bounds.upper_torsion(nl, ps, Ball(1.0))
    a = alpha_fp(nl, ps)
    up_eig = oracle.lambda1_numeric(ps) * a if math.isfinite(a) else math.inf
    ok = lo <= lam * (1 + tol) and lam <= min(up, up_eig) * (1 + tol)
    return {
        "suite": "sandwich", "case": f"{nl.spec} p={ps.p:g} N={ps.N:g}",
        "lower": lo, "value": lam, "upper": up, "eigen_upper": up_eig,
        "at_grid_end": curve.at_grid_end, "passed": bool(ok),
        "seconds": round(time.perf_counter() - t0, 3),
    }


def sandwich_suite(grid: str = "default", tol: float = 1e-4) -> list[dict]:
    from .nonlinearity import parse_nonlinearity

    g = _grid(grid)
    return [
        sandwich_case(parse_nonlinearity(f), PSetting(p, N), tol)
        for f in g["families"] for p in g["p"] for N in g["N"]
    ]


def eigen_suite(grid: str = "default") -> list[dict]:
    g = _grid(grid)
    rows = []
    for p in g["p"]:
        for N in g["N"]:
            ps = PSetting(p, N)
            lam1 = oracle.lambda1_numeric(ps)
            best = eigenvalue.best_lower(Ball(1.0), ps).best
            rows.append({"suite": "eigen", "case": f"p={p:g} N={N:g}", "lower": best.value,
                         "value": lam1, "upper": math.inf, "passed": best.value <= lam1,
                         "detail": best.name})
    return rows


def torsion_case(ps: PSetting, alpha_w: float = 0.0, n_radii: int = 100,
                 rtol: float = 1e-6) -> dict:
    """Numerical torsion against the closed form at ``n_radii`` radii in ``[0, 1)``."""
    r, psi = oracle.torsion_numeric(ps, 1.0, alpha_w, n_radii + 1)
    r, psi = r[:-1], psi[:-1]
    if alpha_w == 0.0:
        exact = np.array([torsion_ball(ps, 1.0, x) for x in r])
    else:
        exact = np.array([weighted_torsion_radial(ps, 1.0, alpha_w, x) for x in r])
    err = float(np.max(np.abs(psi - exact) / exact))
    return {"suite": "torsion", "case": f"p={ps.p:g} N={ps.N:g} alpha_w={alpha_w:g}",
            "lower": 0.0, "value": err, "upper": rtol, "passed": err <= rtol}


def torsion_suite(grid: str = "default") -> list[dict]:
    g = _grid(grid)
    rows = []
    for p in g["torsion_p"]:
        for N in g["N"]:
            ps = PSetting(p, N)
            rows.append(torsion_case(ps))
            for a in g["weights"]:
                rows.append(torsion_case(ps, a))
    return rows


def closed_form_suite(grid: str = "default", rtol: float = 1e-8) -> list[dict]:
    """Closed-form piecewise lower bounds against the optimized ball bound."""
    from .nonlinearity import parse_nonlinearity

    g = _grid(grid)
    rows = []
    for f in g["families"]:
        nl = parse_nonlinearity(f)
        for p in g["p"]:
            for N in g["N"]:
                ps = PSetting(p, N)
                try:
                    cf = bounds.closed_form(nl, ps)
                except DomainError:
                    continue
                lb = bounds.lower_ball(nl, ps)
                rel = abs(cf.lower - lb) / lb
                rows.append({"suite": "closed-form", "case": f"{f} p={p:g} N={N:g}",
                             "lower": cf.lower, "value": lb, "upper": math.nan,
                             "passed": rel <= rtol, "detail": f"branch {cf.branch}"})
    return rows


def run_suite(name: str, grid: str = "default") -> list[dict]:
    if name == "all":
        return [row for s in SUITES for row in run_suite(s, grid)]
    runners = {
        "sandwich": sandwich_suite,
        "eigen": eigen_suite,
        "torsion": torsion_suite,
        "closed-form": closed_form_suite,
    }
    if name not in runners:
        raise DomainError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    return runners[name](grid)
