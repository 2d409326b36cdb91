import math

import pytest
from hypothesis import given, settings, strategies as st

from plapbounds import pointwise as pw
from plapbounds.errors import DomainError, SpecError
from plapbounds.geometry import Ball
from plapbounds.nonlinearity import Nonlinearity, PSetting

EXP = Nonlinearity.exp()
ONE = pw.WeightSpec.constant(1.0)


def test_rho_x():
    assert pw.rho_x(ONE, 0.3, 0.5) == 1.0
    assert pw.rho_x(pw.WeightSpec.radial_power(2.0), 0.5, 0.2) == pytest.approx(0.09)
    assert pw.rho_x(pw.WeightSpec.radial_power(1.0), 0.1, 0.3) == 0.0
    with pytest.raises(DomainError):
        pw.rho_x(ONE, 0.5, 0.6)


def test_pointwise_center_exp():
    val = pw.pointwise_lower(EXP, PSetting(2, 2), ONE, 1.0, 0.0)
    assert val == pytest.approx(-math.log(0.75), rel=1e-13)
    assert val == pytest.approx(0.2877, abs=1e-4)


def test_pointwise_boundary_is_zero():
    for nl in (EXP, Nonlinearity.gelfand(3), Nonlinearity.mems(2)):
        assert pw.pointwise_lower(nl, PSetting(2.5, 3), ONE, 0.7, 1.0) == 0.0


def test_mems_no_supersolution():
    res = pw.pointwise_lower(Nonlinearity.mems(2), PSetting(2, 2), ONE, 2.0, 0.0)
    assert isinstance(res, pw.NoSupersolution) and not res
    # lambda^(1/(p-1)) psi(0) = 2 * 1/4
    assert res.required_F == pytest.approx(0.5)
    assert res.F_infinity == pytest.approx(1 / 3)


def test_parse_weight():
    assert pw.parse_weight("const:c=2", Ball(1.0)).value == 2.0
    w = pw.parse_weight("power:alpha=1.5", Ball(2.0))
    assert w.kind is pw.WeightKind.RADIAL_POWER and w.R == 2.0
    with pytest.raises(SpecError):
        pw.parse_weight("gauss:s=1", Ball(1.0))
    with pytest.raises(DomainError):
        pw.parse_weight("const:c=-1", Ball(1.0))


def test_table_rows():
    rows = pw.pointwise_table(EXP, PSetting(2, 2), ONE, 1.0, [0.0, 0.5, 1.0])
    assert [r["status"] for r in rows] == ["ok", "ok", "ok"]
    assert rows[0]["lower"] > rows[1]["lower"] > rows[2]["lower"] == 0.0
    rows = pw.pointwise_table(Nonlinearity.mems(2), PSetting(2, 2), ONE, 2.0, [0.0, 0.9])
    assert rows[0]["status"] == "no-supersolution" and math.isnan(rows[0]["lower"])


def _val(res):
    return math.inf if isinstance(res, pw.NoSupersolution) else res


weights = st.one_of(st.floats(0.2, 3.0).map(pw.WeightSpec.constant),
                    st.floats(0.2, 3.0).map(pw.WeightSpec.radial_power))
families = st.sampled_from([EXP, Nonlinearity.gelfand(4), Nonlinearity.mems(2)])


@settings(max_examples=60, deadline=None)
@given(nl=families, w=weights, p=st.floats(1.3, 4.0), N=st.integers(1, 8),
       lam=st.floats(0.01, 3.0), a=st.floats(0, 1), b=st.floats(0, 1))
def test_nonincreasing_in_radius(nl, w, p, N, lam, a, b):
    ps = PSetting(p, N)
    r1, r2 = sorted((a, b))
    assert _val(pw.pointwise_lower(nl, ps, w, lam, r1)) >= _val(pw.pointwise_lower(nl, ps, w, lam, r2)) * (1 - 1e-12)


@settings(max_examples=60, deadline=None)
@given(nl=families, w=weights, p=st.floats(1.3, 4.0), N=st.integers(1, 8),
       l1=st.floats(0.01, 3.0), l2=st.floats(0.01, 3.0), r=st.floats(0, 1))
def test_monotone_in_lambda(nl, w, p, N, l1, l2, r):
    ps = PSetting(p, N)
    lo, hi = sorted((l1, l2))
    assert _val(pw.pointwise_lower(nl, ps, w, hi, r)) >= _val(pw.pointwise_lower(nl, ps, w, lo, r)) * (1 - 1e-12)


@settings(max_examples=60, deadline=None)
@given(w=weights, p=st.floats(1.3, 4.0), N=st.integers(1, 8), lam=st.floats(0.01, 3.0))
def test_torsion_path_beats_distance_path_at_center(w, p, N, lam):
    ps = PSetting(p, N)
    assert pw.torsion_bound(ps, w, lam, 0.0) >= pw.distance_bound(ps, w, lam, 0.0) * (1 - 1e-12)
