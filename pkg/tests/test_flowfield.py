import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from tveroute.counters import CallCounters
from tveroute.errors import ConfigurationError, DomainError
from tveroute.flowfield import (
    GriddedField,
    JetFlow,
    JetParams,
    UniformFlow,
    flow_at,
    flow_jacobian,
    gridded_from_provider,
    jacobian_arrays,
    load_gridded,
    max_speed_bound,
    meander_amplitude,
    save_gridded,
    stream_value,
)

from conftest import constant_grid

P = JetParams()


def fd_velocity(x, y, t, h=1e-6):
    """Velocity from central differences of the stream function."""
    u = -(stream_value(x, y + h, t) - stream_value(x, y - h, t)) / (2 * h)
    v = (stream_value(x + h, y, t) - stream_value(x - h, y, t)) / (2 * h)
    return u, v


@pytest.fixture(scope="module")
def sympy_jacobian():
    x, y, t = sp.symbols("x y t", real=True)
    B = P.B0 + P.eps * sp.cos(P.omega * t + P.theta)
    xi = P.k * (x - P.c * t)
    phi = 1 - sp.tanh((y - B * sp.cos(xi)) / sp.sqrt(1 + P.k**2 * B**2 * sp.sin(xi) ** 2))
    u = -sp.diff(phi, y)
    v = sp.diff(phi, x)
    exprs = [sp.diff(u, x), sp.diff(u, y), sp.diff(v, x), sp.diff(v, y)]
    return sp.lambdify((x, y, t), exprs, "math")


class TestJetFormulas:
    def test_amplitude_at_zero(self):
        assert meander_amplitude(0.0) == pytest.approx(1.2, abs=1e-15)

    def test_amplitude_peak(self):
        assert meander_amplitude(-P.theta / P.omega) == pytest.approx(1.5, abs=1e-15)

    def test_amplitude_t1(self):
        assert meander_amplitude(1.0) == pytest.approx(1.2 - 0.3 * math.sin(0.4), rel=1e-14)

    def test_stream_on_jet_axis(self):
        for x, t in [(0.3, 0.0), (4.1, 7.5), (-2.0, 33.0)]:
            y = meander_amplitude(t) * math.cos(P.k * (x - P.c * t))
            assert stream_value(x, y, t) == pytest.approx(1.0, abs=1e-12)

    def test_stream_asymptotes(self):
        assert stream_value(1.0, 60.0, 0.0) == pytest.approx(0.0, abs=1e-12)
        assert stream_value(1.0, -60.0, 0.0) == pytest.approx(2.0, abs=1e-12)

    def test_stream_origin(self):
        assert stream_value(0.0, 0.0, 0.0) == pytest.approx(1.8336546070121553, rel=1e-12)
        assert stream_value(0.0, 0.0, 0.0) == pytest.approx(1 + math.tanh(1.2), rel=1e-12)

    def test_zero_wavenumber_rejected(self):
        with pytest.raises(ConfigurationError):
            JetParams(k=0.0)


class TestFlowAt:
    def test_far_above_jet_is_still(self, jet):
        t = 3.0
        y = meander_amplitude(t) * math.cos(P.k * (2.0 - P.c * t)) + 20
        u, v = flow_at(2.0, y, t, jet)
        assert abs(u) < 1e-8 and abs(v) < 1e-8

    def test_origin_matches_stream_differences(self, jet):
        u, v = flow_at(0.0, 0.0, 0.0, jet)
        fu, fv = fd_velocity(0.0, 0.0, 0.0)
        assert u == pytest.approx(fu, rel=1e-6)
        # v vanishes at the crest; compare absolutely
        assert v == pytest.approx(fv, abs=1e-8)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 12), st.floats(-2.5, 2.5), st.floats(0, 50))
    def test_velocity_is_rotated_stream_gradient(self, x, y, t):
        u, v = flow_at(x, y, t, JetFlow())
        fu, fv = fd_velocity(x, y, t)
        scale = max(math.hypot(u, v), 1e-3)
        assert abs(u - fu) <= 1e-6 * scale
        assert abs(v - fv) <= 1e-6 * scale

    def test_pure(self, jet):
        assert flow_at(1.3, 0.2, 4.0, jet) == flow_at(1.3, 0.2, 4.0, jet)

    def test_counts_one_per_call(self, jet):
        c = CallCounters()
        for _ in range(5):
            flow_at(0.1, 0.2, 0.3, jet, c)
        assert c.cmc == 5

    def test_constant_grid(self):
        g = constant_grid(0.3, -0.1)
        for x, y, t in [(0, 0, 0), (1.5, 0.5, 2.0), (2.0, 1.0, 5.0), (0.7, 0.9, 99.0)]:
            assert flow_at(x, y, t, g) == pytest.approx((0.3, -0.1), abs=1e-15)


class TestGridded:
    def linear_field(self):
        xs = np.array([0.0, 0.5, 2.0, 3.0])
        ys = np.array([-1.0, 0.0, 1.5])
        ts = np.array([0.0, 1.0, 4.0])
        T, Y, X = np.meshgrid(ts, ys, xs, indexing="ij")
        return GriddedField(xs, ys, ts, 0.2 * X - 0.1 * Y + 0.05 * T, 0.3 + 0.1 * X + 0.0 * Y)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0, 3), st.floats(-1, 1.5), st.floats(0, 4))
    def test_reproduces_linear_fields(self, x, y, t):
        u, v = flow_at(x, y, t, self.linear_field())
        assert u == pytest.approx(0.2 * x - 0.1 * y + 0.05 * t, abs=1e-12)
        assert v == pytest.approx(0.3 + 0.1 * x, abs=1e-12)

    def test_time_clamps(self):
        f = self.linear_field()
        assert flow_at(1.0, 0.0, 50.0, f) == flow_at(1.0, 0.0, 4.0, f)
        assert flow_at(1.0, 0.0, -3.0, f) == flow_at(1.0, 0.0, 0.0, f)

    def test_space_outside_raises(self):
        with pytest.raises(DomainError):
            flow_at(3.5, 0.0, 0.0, self.linear_field())
        with pytest.raises(DomainError):
            flow_at(1.0, -1.01, 0.0, self.linear_field())

    def test_single_time_slice(self):
        g = constant_grid(0.1, 0.2, t=(0.0,))
        assert flow_at(1.0, 0.5, 10.0, g) == pytest.approx((0.1, 0.2))

    def test_rejects_bad_axes(self):
        with pytest.raises(ConfigurationError):
            GriddedField(np.array([0.0, 0.0]), np.array([0.0, 1.0]), np.array([0.0]),
                         np.zeros((1, 2, 2)), np.zeros((1, 2, 2)))
        with pytest.raises(ConfigurationError):
            GriddedField(np.array([0.0, 1.0]), np.array([0.0, 1.0]), np.array([0.0]),
                         np.zeros((1, 3, 2)), np.zeros((1, 2, 2)))

    def test_file_round_trip(self, tmp_path):
        f = gridded_from_provider(JetFlow(), np.linspace(0, 4, 5), np.linspace(-2, 2, 4), [0.0, 2.0, 4.0])
        path = tmp_path / "field.txt"
        save_gridded(path, f)
        g = load_gridded(path)
        for name in "xytuv":
            np.testing.assert_array_equal(getattr(g, name), getattr(f, name))
        assert path.read_text().splitlines()[0] == "5 4 3"

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 2 1\n0 1\n0 1\n0\n1 2\n")
        with pytest.raises(ConfigurationError, match="expected"):
            load_gridded(path)


class TestJacobian:
    def test_uniform_grid_is_shear_free(self):
        assert flow_jacobian(1.0, 0.5, 1.0, constant_grid(0.3, -0.1)) == pytest.approx((0, 0, 0, 0), abs=1e-12)

    def test_divergence_free_at_origin(self, jet):
        ux, _, _, vy = flow_jacobian(0.0, 0.0, 0.0, jet)
        assert abs(ux + vy) < 1e-6

    def test_matches_symbolic_derivatives(self, jet, sympy_jacobian):
        rng = np.random.default_rng(7)
        pts = np.column_stack([rng.uniform(0, 12, 100), rng.uniform(-4, 4, 100), rng.uniform(0, 50, 100)])
        for x, y, t in pts:
            got = np.array(flow_jacobian(x, y, t, jet))
            want = np.array(sympy_jacobian(x, y, t))
            assert np.max(np.abs(got - want)) <= 1e-5 * max(np.max(np.abs(want)), 1e-2)

    def test_counts_eight(self, jet):
        c = CallCounters()
        jacobian_arrays(jet, np.zeros(3), np.zeros(3), np.zeros(3), counters=c)
        assert c.cmc == 24

    def test_gridded_boundary_uses_one_sided_stencil(self):
        xs = np.array([0.0, 1.0, 2.0])
        ys = np.array([0.0, 1.0])
        X = np.broadcast_to(xs, (1, 2, 3))
        f = GriddedField(xs, ys, np.array([0.0]), 2.0 * X, np.zeros((1, 2, 3)))
        ux, uy, vx, vy = flow_jacobian(0.0, 0.0, 0.0, f)
        assert ux == pytest.approx(2.0) and uy == pytest.approx(0.0)


class TestSpeedBound:
    def test_zero_field(self):
        assert max_speed_bound(UniformFlow(), (0, 1, 0, 1), (0, 1)) == 0.0

    def test_constant_field(self):
        assert max_speed_bound(UniformFlow(0.3, -0.4), (0, 1, 0, 1), (0, 1)) == pytest.approx(0.525)

    def test_jet_lattice_refinement(self, jet):
        a = max_speed_bound(jet, (0, 12, -4, 4), (0, 50))
        b = max_speed_bound(jet, (0, 12, -4, 4), (0, 50), lattice=(128, 128, 32))
        assert a > 0
        assert abs(a - b) / b < 0.05
