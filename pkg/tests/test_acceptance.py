"""Acceptance criteria, one test (or parametrized family) per criterion.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import time

import numpy as np
import pytest
from scipy import special

from plapbounds import bounds, eigenvalue as ev, nonexistence as ne, oracle, verify
from plapbounds.geometry import Ball
from plapbounds.nonlinearity import Nonlinearity, PSetting, parse_nonlinearity

EXP = Nonlinearity.exp()
criterion = pytest.mark.criterion


def note(record_property, text):
    record_property("detail", text)


@criterion(1, "exp p=2 N=10: oracle 16 (rel 1e-3), closed form exactly 16, < 30 s")
def test_c01_exact_regime_p2(record_property):
    t0 = time.perf_counter()
    lam = oracle.lambda_star_numeric(PSetting(2, 10), EXP).lambda_star_numeric
    dt = time.perf_counter() - t0
    cf = bounds.closed_form_exp(PSetting(2, 10))
    note(record_property, f"oracle={lam:.10g} closed={cf.lower!r} branch={cf.branch} t={dt:.1f}s")
    assert abs(lam - 16) / 16 <= 1e-3
    assert cf.branch == 3 and cf.lower == 16.0
    assert dt < 30


@criterion(2, "exp p=3 N=12: oracle 81 (rel 5e-3), < 60 s")
def test_c02_exact_regime_p3(record_property):
    t0 = time.perf_counter()
    lam = oracle.lambda_star_numeric(PSetting(3, 12), EXP).lambda_star_numeric
    dt = time.perf_counter() - t0
    note(record_property, f"oracle={lam:.10g} t={dt:.1f}s")
    assert abs(lam - 81) / 81 <= 5e-3
    assert dt < 60


@criterion(3, "(1+u)^8 p=2 N=11: oracle 122/49 (rel 5e-3)")
def test_c03_power_case(record_property):
    lam = oracle.lambda_star_numeric(PSetting(2, 11), Nonlinearity.gelfand(8)).lambda_star_numeric
    note(record_property, f"oracle={lam:.10g} target={122 / 49:.10g}")
    assert abs(lam - 122 / 49) / (122 / 49) <= 5e-3


@criterion(4, "sandwich lower_ball <= oracle <= upper_torsion, 60 cases, < 10 min")
def test_c04_sandwich_suite(record_property):
    t0 = time.perf_counter()
    rows = verify.sandwich_suite("default", tol=1e-4)
    dt = time.perf_counter() - t0
    bad = [r["case"] for r in rows if not r["passed"]]
    note(record_property, f"cases={len(rows)} failed={len(bad)} t={dt:.0f}s")
    assert len(rows) >= 45 and not bad, bad
    assert dt < 600


@criterion(5, "closed forms equal lower_ball (rel 1e-8), < 1 s")
def test_c05_closed_form_equals_optimizer(record_property):
    t0 = time.perf_counter()
    worst = 0.0
    n = 0
    for f in verify.SANDWICH_FAMILIES:
        nl = parse_nonlinearity(f)
        for p in (1.5, 2.0, 3.0):
            for N in (1, 2, 3, 5, 10):
                ps = PSetting(p, N)
                cf = bounds.closed_form(nl, ps).lower
                lb = bounds.lower_ball(nl, ps)
                worst = max(worst, abs(cf - lb) / lb)
                n += 1
    dt = time.perf_counter() - t0
    note(record_property, f"cases={n} max_rel={worst:.1e} t={dt:.2f}s")
    assert worst <= 1e-8
    assert dt < 1.0


@criterion(6, "lambda_1(p=2,N=2) = j0^2 within 1e-6; all eigen lower bounds below it")
def test_c06_eigenvalue(record_property):
    ps = PSetting(2, 2)
    lam1 = oracle.lambda1_numeric(ps)
    exact = special.jn_zeros(0, 1)[0] ** 2
    rep = ev.best_lower(Ball(1.0), ps)
    note(record_property, f"lambda1={lam1:.10f} err={abs(lam1 - exact):.1e}")
    assert abs(lam1 - exact) <= 1e-6
    assert abs(lam1 - 5.78318596) <= 1e-6
    assert all(e.value <= lam1 for e in rep.entries)
    assert ev.piecewise_lower_ball(ps) == pytest.approx(4.0, rel=1e-15)
    assert ev.np_comparison(ps) == pytest.approx(4.0, rel=1e-15)
    assert max(ev.piecewise_lower_ball(ps), ev.np_comparison(ps)) <= 5.7832


@criterion(7, "piecewise >= Np for p in {1.2,1.5,2}, N=1..15, and p=3, N>=9")
def test_c07_eigen_comparison(record_property):
    def better(p, N):
        ps = PSetting(p, N)
        return ev.piecewise_lower_ball(ps) >= ev.np_comparison(ps) * (1 - 1e-12)

    assert all(better(p, N) for p in (1.2, 1.5, 2.0) for N in range(1, 16))
    assert all(better(3.0, N) for N in range(9, 16))
    first = min(N for N in range(1, 16) if all(better(3.0, M) for M in range(N, 16)))
    note(record_property, f"p=3 holds from N={first}")
    assert first == 4


@criterion(8, "torsion solve matches closed forms at 100 radii (rel 1e-6), weighted too")
def test_c08_torsion_oracle(record_property):
    rows = verify.torsion_suite("default")
    worst = max(r["value"] for r in rows)
    weighted = sum(1 for r in rows if "alpha_w=0 " not in r["case"] + " ")
    note(record_property, f"cases={len(rows)} weighted={weighted} max_rel={worst:.1e}")
    assert all(r["passed"] for r in rows)
    assert weighted > 0


@criterion(9, "MEMS sandwich [16/27, 4/3] exactly, oracle ~0.789 inside, < 30 s")
def test_c09_mems(record_property):
    s = ne.mems_sandwich(0.0, 2, 1.0)
    t0 = time.perf_counter()
    lam = oracle.lambda_star_numeric(PSetting(2, 2), Nonlinearity.mems(2)).lambda_star_numeric
    dt = time.perf_counter() - t0
    note(record_property, f"[{s.lower:.6f}, {s.upper:.6f}] oracle={lam:.6f} t={dt:.1f}s")
    assert s.lower == pytest.approx(16 / 27, rel=1e-15)
    assert s.upper == pytest.approx(4 / 3, rel=1e-15)
    assert s.contains(lam)
    assert abs(lam - 0.789) < 5e-4
    assert dt < 30
    for a, N in [(0, 1), (1, 2), (2, 2)]:
        x = oracle.lambda_star_numeric(PSetting(2, N), Nonlinearity.mems(2), alpha_w=a)
        assert ne.mems_sandwich(a, N).contains(x.lambda_star_numeric, 1e-4)


def _kato_profiles():
    ps = PSetting(2, 2)
    yield "quadratic", ps, EXP, oracle.RadialSolution.from_function(
        ps, lambda r: (1 - r * r) / 4, lambda r: -r / 2)
    yield "f=1", ps, Nonlinearity.constant(1.0), oracle.RadialSolution.from_function(
        ps, lambda r: (1 - r * r) / 4, lambda r: -r / 2)
    yield "minimal", ps, EXP, oracle.minimal_solution(ps, EXP, 1.0)


@criterion(10, "Kato inequality holds on 3 profiles (slack 1e-4)")
@pytest.mark.parametrize("name", ["quadratic", "f=1", "minimal"])
def test_c10_kato(name, record_property):
    _, ps, nl, prof = next(x for x in _kato_profiles() if x[0] == name)
    rep = oracle.kato_inequality_check(ps, nl, prof, slack=1e-4)
    note(record_property, f"{name}: min margin {rep.min_margin:.1e}")
    assert rep.passed
    if name == "f=1":
        # G linear: equality up to the finite-difference slack
        assert np.max(np.abs(rep.lhs - rep.rhs)) <= rep.slack


@criterion(11, "q-limit: gap(q=20) < gap(q=2), both bounds within 15% of 4 at q=20")
def test_c11_q_limit(record_property):
    pts = {pt.q: pt for pt in bounds.q_limit_study(EXP, PSetting(2, 2), [2, 20])}
    target = bounds.q_limit_target(PSetting(2, 2))
    q20 = pts[20.0]
    note(record_property, f"gap2={pts[2.0].gap:.4f} gap20={q20.gap:.4f} "
                          f"lower20={q20.lower:.4f} upper20={q20.upper:.4f}")
    assert target == 4.0
    assert q20.gap < pts[2.0].gap
    assert abs(q20.lower - 4) <= 0.15 * 4 and abs(q20.upper - 4) <= 0.15 * 4
