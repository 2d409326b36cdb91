import math

import pytest
from hypothesis import given, settings, strategies as st

from plapbounds.errors import DomainError, SpecError
from plapbounds.geometry import (
    Ball,
    Measured,
    auxiliary_w,
    parse_geometry,
    scale_to_radius,
    torsion_ball,
    torsion_max_estimate,
    weighted_torsion_radial,
)
from plapbounds.nonlinearity import PSetting


def test_torsion_ball_values():
    assert torsion_ball(PSetting(2, 2), 1.0, 0.0) == pytest.approx(0.25, rel=1e-15)
    assert torsion_ball(PSetting(3, 4), 1.0, 0.0) == pytest.approx(1 / 3, rel=1e-15)
    assert torsion_ball(PSetting(2.7, 5), 2.0, 2.0) == 0.0


def test_torsion_estimates():
    est = torsion_max_estimate(Ball(1.0), PSetting(2, 3))
    assert est.exact and est.lower == est.upper == pytest.approx(1 / 6, rel=1e-15)

    disk = Measured(diameter=2.0, chebyshev_radius=1.0, volume=math.pi, perimeter=2 * math.pi)
    est = torsion_max_estimate(disk, PSetting(2, 2))
    assert est.lower == pytest.approx(0.25, rel=1e-15)
    assert est.upper == pytest.approx(0.25, rel=1e-15)

    square = Measured(math.sqrt(2), 0.5, 1.0, 4.0)
    est = torsion_max_estimate(square, PSetting(2, 2))
    assert est.lower == pytest.approx(1 / 16, rel=1e-15)
    assert est.upper == pytest.approx(1 / 8, rel=1e-14)
    # the known value for the unit square
    assert est.lower <= 0.0737 <= est.upper


def test_rigidity_branch_can_win():
    # thin, long box-like data where V/P is large relative to the inradius bound
    g = Measured(diameter=10.0, chebyshev_radius=0.01, volume=5.0, perimeter=12.0)
    est = torsion_max_estimate(g, PSetting(2, 2))
    assert est.lower == pytest.approx((1 / 3) * (5 / 12) ** 2, rel=1e-14)


def test_weighted_torsion_values():
    ps = PSetting(2, 2)
    assert weighted_torsion_radial(ps, 1.0, 1.0, 0.0) == pytest.approx(1 / 9, rel=1e-15)
    assert weighted_torsion_radial(ps, 1.0, 1.0, 1.0) == 0.0
    assert weighted_torsion_radial(ps, 1.0, 1e-6, 0.0) == pytest.approx(0.25, rel=1e-4)
    with pytest.raises(DomainError):
        weighted_torsion_radial(ps, 1.0, 0.0, 0.0)


def test_auxiliary_w():
    assert auxiliary_w(PSetting(2, 1), 1.0, 0.0) == pytest.approx(0.5, rel=1e-15)
    assert auxiliary_w(PSetting(3, 2), 0.7, 0.7) == 0.0


def test_parse_geometry():
    assert parse_geometry("ball:R=2") == Ball(2.0)
    assert parse_geometry("measured:diam=1.41421356,cheb=0.5,vol=1,per=4").volume == 1.0
    for bad in ["ball", "ball:R=x", "cube:a=1", "measured:diam=1"]:
        with pytest.raises(SpecError, match="ball:R="):
            parse_geometry(bad)
    with pytest.raises(DomainError):
        parse_geometry("ball:R=-1")


def test_measured_validation():
    with pytest.raises(DomainError):
        Measured(1.0, 0.8, 1.0, 1.0)
    with pytest.raises(DomainError):
        Measured(1.0, 0.2, 0.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(p=st.floats(1.1, 5.0), N=st.integers(1, 15), R=st.floats(0.1, 10.0),
       a=st.floats(0.0, 1.0), b=st.floats(0.0, 1.0))
def test_torsion_decreasing_and_scaling(p, N, R, a, b):
    ps = PSetting(p, N)
    r1, r2 = sorted((a * R, b * R))
    assert torsion_ball(ps, R, r1) >= torsion_ball(ps, R, r2)
    q = p / (p - 1)
    if (r2 / R) ** q - (r1 / R) ** q > 1e-12:
        assert torsion_ball(ps, R, r1) > torsion_ball(ps, R, r2)
    unit = torsion_ball(ps, 1.0, 0.0)
    assert torsion_ball(ps, R, 0.0) == pytest.approx(R ** (p / (p - 1)) * unit, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(p=st.floats(1.1, 5.0), N=st.integers(1, 10), cheb=st.floats(0.05, 1.0),
       stretch=st.floats(1.0, 5.0), vol=st.floats(0.01, 10.0), per=st.floats(0.1, 50.0))
def test_estimate_ordered(p, N, cheb, stretch, vol, per):
    g = Measured(2 * cheb * stretch, cheb, vol, per)
    try:
        est = torsion_max_estimate(g, PSetting(p, N))
    except DomainError as exc:
        # only impossible data (rigidity bound above the diameter bound) is refused
        assert "inconsistent" in str(exc)
    else:
        assert est.lower <= est.upper * (1 + 1e-12)


def test_scale_to_radius():
    assert scale_to_radius(16.0, 2.0, 2.0) == pytest.approx(4.0)
    assert scale_to_radius(9.0, 2.0, 0.5, alpha_w=1.0) == pytest.approx(72.0)
