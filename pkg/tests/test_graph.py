import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tveroute.errors import ConfigurationError
from tveroute.graph import GridSpec, build_grid, nearest_vertex


def coprime_offsets(order):
    """Independent description: 4 = unit axis steps, otherwise coprime steps up to a radius."""
    if order == 4:
        return {(1, 0), (-1, 0), (0, 1), (0, -1)}
    radius = {8: 1, 16: 2, 32: 3}[order]
    return {(a, b) for a in range(-radius, radius + 1) for b in range(-radius, radius + 1)
            if (a, b) != (0, 0) and math.gcd(a, b) == 1}


def vid(g, col, row):
    return row * g.nx + col


@pytest.mark.parametrize("order, size", [(4, 3), (8, 3), (16, 5), (32, 7)])
def test_interior_degree(order, size):
    g = build_grid(GridSpec(0, 1, 0, 1, size, size, order))
    c = size // 2
    assert len(g.adjacency[vid(g, c, c)]) == order


def test_corner_degree_4():
    g = build_grid(GridSpec(0, 1, 0, 1, 3, 3, 4))
    assert [len(g.adjacency[v]) for v in (0, 2, 6, 8)] == [2, 2, 2, 2]
    assert len(g.adjacency[4]) == 4


@pytest.mark.parametrize("order", [4, 8, 16, 32])
def test_adjacency_matches_offset_enumeration(order):
    g = build_grid(GridSpec(-1, 2, 0, 4, 9, 8, order))
    offs = coprime_offsets(order)
    for a in range(g.n_vertices):
        ca, ra = a % g.nx, a // g.nx
        expected = sorted(b for b in range(g.n_vertices) if (b % g.nx - ca, b // g.nx - ra) in offs)
        assert g.adjacency[a].tolist() == expected


@pytest.mark.parametrize("order", [4, 8, 16, 32])
def test_structure(order):
    g = build_grid(GridSpec(0, 3, -1, 1, 10, 7, order))
    for a, succ in enumerate(g.adjacency):
        assert a not in succ
        assert list(succ) == sorted(succ)
        for b in succ:
            assert a in g.adjacency[b]
        interior = all(0 <= c < n for c, n in [
            (a % g.nx - 3, g.nx), (a % g.nx + 3, g.nx), (a // g.nx - 3, g.ny), (a // g.nx + 3, g.ny)])
        if interior:
            assert len(succ) == order
        else:
            assert len(succ) <= order
    assert np.all(g.positions[:, 0] >= 0) and np.all(g.positions[:, 0] <= 3)


def test_boundary_strictly_fewer():
    g = build_grid(GridSpec(0, 1, 0, 1, 9, 9, 16))
    assert all(len(g.adjacency[vid(g, 0, r)]) < 16 for r in range(9))


def test_deterministic():
    spec = GridSpec(0, 12, -4, 4, 61, 41, 16)
    a, b = build_grid(spec), build_grid(spec)
    assert a.positions.tobytes() == b.positions.tobytes()
    assert all(x.tobytes() == y.tobytes() for x, y in zip(a.adjacency, b.adjacency))


@pytest.mark.parametrize("kw", [dict(nx=1), dict(x_max=-1.0), dict(neighborhood=6)])
def test_invalid_spec(kw):
    base = dict(x_min=0.0, x_max=1.0, y_min=0.0, y_max=1.0, nx=3, ny=3, neighborhood=8)
    base.update(kw)
    with pytest.raises(ConfigurationError):
        GridSpec(**base)


class TestNearest:
    g = build_grid(GridSpec(0, 2, 0, 1, 5, 3, 8))

    def test_on_lattice(self):
        assert nearest_vertex(self.g, (1.5, 0.5)) == vid(self.g, 3, 1)

    def test_cell_center_tie(self):
        g2 = build_grid(GridSpec(0, 1, 0, 1, 2, 2, 4))
        assert nearest_vertex(g2, (0.5, 0.5)) == 0

    @given(st.floats(0, 2), st.floats(0, 1))
    def test_brute_force(self, x, y):
        d = [(px - x) ** 2 + (py - y) ** 2 for px, py in self.g.positions]
        best = min(range(len(d)), key=lambda i: (d[i], i))
        assert nearest_vertex(self.g, (x, y)) == best

    def test_out_of_bounds(self):
        with pytest.raises(ConfigurationError):
            nearest_vertex(self.g, (2.1, 0.5))
