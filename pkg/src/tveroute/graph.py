"""Rectangular lattice graphs with 4/8/16/32-neighbourhoods."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from .errors import ConfigurationError

_RINGS = {
    4: [(1, 0), (0, 1), (-1, 0), (0, -1)],
    8: [(1, 1), (-1, 1), (-1, -1), (1, -1)],
    16: [(a, b) for a, b in [(1, 2), (2, 1)] for a, b in
         [(a, b), (-a, b), (a, -b), (-a, -b)]],
    32: [(a, b) for a, b in [(1, 3), (3, 1), (2, 3), (3, 2)] for a, b in
         [(a, b), (-a, b), (a, -b), (-a, -b)]],
}


def neighbourhood_offsets(order: int) -> List[Tuple[int, int]]:
    """Lattice offsets of a neighbourhood; higher orders add coprime rings."""
    if order not in _RINGS:
        raise ConfigurationError(f"neighbourhood must be one of 4, 8, 16, 32; got {order}")
    offsets = []
    for ring in sorted(_RINGS):
        if ring <= order:
            offsets.extend(_RINGS[ring])
    return offsets


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    neighborhood: int = 8

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ConfigurationError("grid needs nx, ny >= 2")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ConfigurationError("grid bounds must satisfy x_max > x_min and y_max > y_min")
        neighbourhood_offsets(self.neighborhood)

    @property
    def region(self) -> Tuple[float, float, float, float]:
        return (self.x_min, self.x_max, self.y_min, self.y_max)


@dataclass(frozen=True, eq=False)
class GridGraph:
    """Lattice vertices (id = row * nx + col, rows along y) and successor lists."""

    spec: GridSpec
    positions: np.ndarray
    adjacency: Tuple[np.ndarray, ...]

    @property
    def n_vertices(self) -> int:
        return self.positions.shape[0]

    @property
    def nx(self) -> int:
        return self.spec.nx

    @property
    def ny(self) -> int:
        return self.spec.ny

    def position(self, vid: int) -> Tuple[float, float]:
        x, y = self.positions[vid]
        return float(x), float(y)

    def has_edge(self, a: int, b: int) -> bool:
        return bool(np.any(self.adjacency[a] == b))

    def as_dict(self) -> Dict[int, List[int]]:
        return {i: adj.tolist() for i, adj in enumerate(self.adjacency)}


def build_grid(spec: GridSpec) -> GridGraph:
    xs = np.linspace(spec.x_min, spec.x_max, spec.nx)
    ys = np.linspace(spec.y_min, spec.y_max, spec.ny)
    X, Y = np.meshgrid(xs, ys)
    positions = np.column_stack([X.ravel(), Y.ravel()])
    offsets = neighbourhood_offsets(spec.neighborhood)
    adjacency = []
    for row in range(spec.ny):
        for col in range(spec.nx):
            succ = [
                (row + dj) * spec.nx + (col + di)
                for di, dj in offsets
                if 0 <= col + di < spec.nx and 0 <= row + dj < spec.ny
            ]
            adjacency.append(np.array(sorted(succ), dtype=np.int64))
    return GridGraph(spec, positions, tuple(adjacency))


def nearest_vertex(g: GridGraph, p) -> int:
    """Closest lattice vertex to ``p``; ties go to the lowest id."""
    x, y = float(p[0]), float(p[1])
    s = g.spec
    if not (s.x_min <= x <= s.x_max and s.y_min <= y <= s.y_max):
        raise ConfigurationError(f"position ({x}, {y}) lies outside the grid bounds")
    d2 = (g.positions[:, 0] - x) ** 2 + (g.positions[:, 1] - y) ** 2
    return int(np.argmin(d2))
