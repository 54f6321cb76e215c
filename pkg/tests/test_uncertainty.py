import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tveroute.errors import ConfigurationError
from tveroute.flowfield import FlowSample
from tveroute.uncertainty import (
    NOMINAL,
    ParameterSet,
    UncertaintyDomain,
    corner_sets,
    perturb_flow,
    perturb_speed,
)

fractions = st.sampled_from([0.0, 0.025, 0.05, 0.1, 0.15])


def signs(sets):
    return [(p.sign_u, p.sign_v, p.sign_speed) for p in sets]


def test_full_cube():
    sets = corner_sets(UncertaintyDomain(0.05, 0.05, 0.05))
    assert signs(sets) == list(itertools.product((-1, 1), repeat=3))


def test_nominal_collapse():
    assert signs(corner_sets(UncertaintyDomain())) == [(0, 0, 0)]


def test_current_only_gives_four_vertices():
    sets = corner_sets(UncertaintyDomain(0.05, 0.05, 0.0))
    assert signs(sets) == [(-1, -1, 0), (-1, 1, 0), (1, -1, 0), (1, 1, 0)]


@given(fractions, fractions, fractions)
def test_cardinality_and_midpoint(fu, fv, fs):
    dom = UncertaintyDomain(fu, fv, fs)
    sets = corner_sets(dom)
    assert len(sets) == 2 ** sum(f > 0 for f in (fu, fv, fs))
    for attr in ("u_factor", "v_factor", "speed_factor"):
        mean = sum(getattr(p, attr) for p in sets) / len(sets)
        assert mean == pytest.approx(1.0, abs=1e-15)


def test_perturb_flow_examples():
    up = ParameterSet(1, 1, 1, 0.05, 0.05, 0.05)
    assert perturb_flow(FlowSample(0.2, -0.1), up) == pytest.approx((0.21, -0.105))
    down = ParameterSet(-1, -1, -1, 0.1, 0.1, 0.1)
    assert perturb_flow(FlowSample(0.0, 0.4), down) == pytest.approx((0.0, 0.36))
    assert perturb_flow(FlowSample(0.123, -4.5), NOMINAL) == (0.123, -4.5)


def test_perturb_speed_examples():
    assert perturb_speed(0.5, ParameterSet(0, 0, -1, 0, 0, 0.05)) == pytest.approx(0.475)
    assert perturb_speed(0.5, NOMINAL) == 0.5
    assert perturb_speed(0.5, ParameterSet(0, 0, 1, 0, 0, 0.15)) == pytest.approx(0.575)


@given(st.floats(-5, 5), st.floats(-5, 5), fractions, fractions)
def test_perturbation_linear_in_nominal(u, v, fu, fv):
    for p in corner_sets(UncertaintyDomain(fu, fv, 0.0)):
        a = perturb_flow(FlowSample(u, v), p)
        b = perturb_flow(FlowSample(2 * u, 2 * v), p)
        assert b == pytest.approx((2 * a.u, 2 * a.v))


def test_validation():
    with pytest.raises(ConfigurationError):
        UncertaintyDomain(1.0, 0, 0)
    with pytest.raises(ConfigurationError):
        UncertaintyDomain(-0.1, 0, 0)
    with pytest.raises(ConfigurationError):
        ParameterSet(0, 0, 0, 0.05, 0, 0)
    with pytest.raises(ConfigurationError):
        ParameterSet(2, 0, 0)
    with pytest.raises(ConfigurationError):
        perturb_speed(-0.5, NOMINAL)


def test_from_percent():
    assert UncertaintyDomain.from_percent(5).fractions == (0.05, 0.05, 0.05)
    assert UncertaintyDomain.from_percent(0).is_nominal
