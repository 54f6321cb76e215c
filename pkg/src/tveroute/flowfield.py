"""Time-varying current fields: the analytic meandering jet and gridded samples.

Every provider exposes ``velocity(x, y, t)`` on broadcastable numpy arrays.
That method is uncounted; the module-level helpers (:func:`flow_at`,
:func:`sample_flow`, :func:`flow_jacobian`) charge the current-model counter
(CMC) of the :class:`~tveroute.counters.CallCounters` they are handed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .counters import CallCounters
from .errors import ConfigurationError, DomainError

Region = Tuple[float, float, float, float]  # x_min, x_max, y_min, y_max


class FlowSample(NamedTuple):
    u: float
    v: float


@dataclass(frozen=True)
class JetParams:
    B0: float = 1.2
    eps: float = 0.3
    omega: float = 0.4
    theta: float = math.pi / 2
    k: float = 0.84
    c: float = 0.12

    def __post_init__(self):
        if self.k == 0:
            raise ConfigurationError("jet wavenumber k must be non-zero")

    @property
    def period(self) -> float:
        """Period of the meander-amplitude oscillation."""
        return 2 * math.pi / self.omega if self.omega else math.inf


def meander_amplitude(t, p: JetParams = JetParams()):
    return p.B0 + p.eps * np.cos(p.omega * t + p.theta)


def stream_value(x, y, t, p: JetParams = JetParams()):
    """Stream function of the meandering jet; 2 far south, 0 far north."""
    B = meander_amplitude(t, p)
    xi = p.k * (x - p.c * t)
    denom = np.sqrt(1.0 + (p.k * B * np.sin(xi)) ** 2)
    return 1.0 - np.tanh((y - B * np.cos(xi)) / denom)


def _sech2(z):
    # clip keeps cosh finite; sech^2 underflows to 0 well before |z| = 350
    return 1.0 / np.cosh(np.clip(z, -350.0, 350.0)) ** 2


class FlowProvider:
    """Base class for current fields. Subclasses are immutable."""

    #: spatial extent as (x_min, x_max, y_min, y_max); None means unbounded
    bounds: Optional[Region] = None

    def velocity(self, x, y, t):
        raise NotImplementedError

    def clip_to_domain(self, x, y):
        if self.bounds is None:
            return x, y
        x0, x1, y0, y1 = self.bounds
        return np.clip(x, x0, x1), np.clip(y, y0, y1)


@dataclass(frozen=True)
class JetFlow(FlowProvider):
    """Analytic meandering jet; velocity is the rotated gradient of the stream function."""

    params: JetParams = field(default_factory=JetParams)

    def velocity(self, x, y, t):
        p = self.params
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        t = np.asarray(t, dtype=float)
        B = p.B0 + p.eps * np.cos(p.omega * t + p.theta)
        xi = p.k * (x - p.c * t)
        s = np.sin(xi)
        co = np.cos(xi)
        kB = p.k * B
        D2 = 1.0 + (kB * s) ** 2
        D = np.sqrt(D2)
        N = y - B * co
        sech2 = _sech2(N / D)
        # d(eta)/dx with eta = N / D
        deta_dx = (kB * s) / D - N * (p.k * kB * kB * s * co) / (D2 * D)
        u = sech2 / D
        v = -sech2 * deta_dx
        return u, v


@dataclass(frozen=True)
class UniformFlow(FlowProvider):
    """Spatially and temporally constant current (still water by default)."""

    u: float = 0.0
    v: float = 0.0

    def velocity(self, x, y, t):
        shape = np.broadcast_shapes(np.shape(x), np.shape(y), np.shape(t))
        return np.full(shape, float(self.u)), np.full(shape, float(self.v))


@dataclass(frozen=True, eq=False)
class GriddedField(FlowProvider):
    """Sampled currents; arrays are indexed ``[time][y][x]``.

    Space is interpolated bilinearly, time linearly. Times outside the sampled
    span clamp to the nearest slice; positions outside the grid raise
    :class:`DomainError`.
    """

    x: np.ndarray
    y: np.ndarray
    t: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        axes = {}
        for name in ("x", "y", "t"):
            a = np.asarray(getattr(self, name), dtype=float)
            if a.ndim != 1 or a.size < 1:
                raise ConfigurationError(f"axis {name} must be a non-empty 1-D array")
            if a.size > 1 and not np.all(np.diff(a) > 0):
                raise ConfigurationError(f"axis {name} must be strictly increasing")
            axes[name] = a
            object.__setattr__(self, name, a)
        if axes["x"].size < 2 or axes["y"].size < 2:
            raise ConfigurationError("gridded field needs at least 2 samples per spatial axis")
        shape = (axes["t"].size, axes["y"].size, axes["x"].size)
        for name in ("u", "v"):
            a = np.asarray(getattr(self, name), dtype=float)
            if a.shape != shape:
                raise ConfigurationError(f"{name} has shape {a.shape}, expected {shape}")
            if not np.all(np.isfinite(a)):
                raise ConfigurationError(f"{name} contains non-finite values")
            object.__setattr__(self, name, a)
        object.__setattr__(
            self, "bounds", (axes["x"][0], axes["x"][-1], axes["y"][0], axes["y"][-1])
        )

    @staticmethod
    def _locate(axis, q):
        i = np.clip(np.searchsorted(axis, q, side="right") - 1, 0, axis.size - 2)
        w = (q - axis[i]) / (axis[i + 1] - axis[i])
        return i, w

    def velocity(self, x, y, t):
        x, y, t = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float), np.asarray(t, dtype=float)
        )
        x0, x1, y0, y1 = self.bounds
        if np.any((x < x0) | (x > x1) | (y < y0) | (y > y1)):
            raise DomainError(f"position outside gridded field [{x0}, {x1}] x [{y0}, {y1}]")
        i, wx = self._locate(self.x, x)
        j, wy = self._locate(self.y, y)
        if self.t.size == 1:
            k = np.zeros(t.shape, dtype=int)
            k1 = k
            wt = np.zeros(t.shape)
        else:
            tc = np.clip(t, self.t[0], self.t[-1])
            k, wt = self._locate(self.t, tc)
            k1 = k + 1

        def interp(a):
            def plane(kk):
                return (
                    (1 - wy) * ((1 - wx) * a[kk, j, i] + wx * a[kk, j, i + 1])
                    + wy * ((1 - wx) * a[kk, j + 1, i] + wx * a[kk, j + 1, i + 1])
                )

            return (1 - wt) * plane(k) + wt * plane(k1)

        return interp(self.u), interp(self.v)


def sample_flow(provider: FlowProvider, x, y, t, counters: Optional[CallCounters] = None):
    """Vectorised flow evaluation; charges one CMC per broadcast element."""
    u, v = provider.velocity(x, y, t)
    if counters is not None:
        counters.cmc += int(np.size(u))
    return u, v


def flow_at(x: float, y: float, t: float, provider: FlowProvider,
            counters: Optional[CallCounters] = None) -> FlowSample:
    u, v = sample_flow(provider, x, y, t, counters)
    return FlowSample(float(u), float(v))


def jacobian_arrays(provider: FlowProvider, x, y, t, step: float = 1e-4,
                    counters: Optional[CallCounters] = None):
    """Central-difference partials (du/dx, du/dy, dv/dx, dv/dy) on arrays.

    Each partial is charged two current-model calls (8 per point). Gridded
    stencils are clipped at the domain edge, falling back to one-sided
    differences there.
    """
    x, y, t = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float), np.asarray(t, dtype=float)
    )
    xp, _ = provider.clip_to_domain(x + step, y)
    xm, _ = provider.clip_to_domain(x - step, y)
    _, yp = provider.clip_to_domain(x, y + step)
    _, ym = provider.clip_to_domain(x, y - step)
    up_x, vp_x = provider.velocity(xp, y, t)
    um_x, vm_x = provider.velocity(xm, y, t)
    up_y, vp_y = provider.velocity(x, yp, t)
    um_y, vm_y = provider.velocity(x, ym, t)
    if counters is not None:
        counters.cmc += 8 * int(x.size)
    hx = xp - xm
    hy = yp - ym
    return (up_x - um_x) / hx, (up_y - um_y) / hy, (vp_x - vm_x) / hx, (vp_y - vm_y) / hy


def flow_jacobian(x: float, y: float, t: float, provider: FlowProvider, step: float = 1e-4,
                  counters: Optional[CallCounters] = None) -> Tuple[float, float, float, float]:
    return tuple(float(d) for d in jacobian_arrays(provider, x, y, t, step, counters))


def max_speed_bound(provider: FlowProvider, region: Region, time_span: Tuple[float, float],
                    lattice: Tuple[int, int, int] = (64, 64, 16), safety: float = 1.05) -> float:
    """Upper estimate of the current speed over a region and time span.

    Samples a regular lattice (endpoints included) and inflates the largest
    observed speed by ``safety``.
    """
    x0, x1, y0, y1 = region
    if not (x1 >= x0 and y1 >= y0):
        raise ConfigurationError("region must be non-empty")
    nx, ny, nt = lattice
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    ts = np.linspace(time_span[0], time_span[1], nt)
    T, Y, X = np.meshgrid(ts, ys, xs, indexing="ij")
    u, v = provider.velocity(X, Y, T)
    return float(np.max(np.hypot(u, v))) * safety


def load_gridded(path) -> GriddedField:
    """Read the whitespace-separated gridded field text format."""
    tokens = Path(path).read_text(encoding="utf-8").split()
    try:
        nx, ny, nt = (int(tok) for tok in tokens[:3])
        values = np.array([float(tok) for tok in tokens[3:]])
    except ValueError as exc:
        raise ConfigurationError(f"{path}: malformed gridded field ({exc})") from exc
    expected = nx + ny + nt + 2 * nt * ny * nx
    if values.size != expected:
        raise ConfigurationError(f"{path}: expected {expected} values after header, found {values.size}")
    xs, ys, ts = np.split(values[: nx + ny + nt], [nx, nx + ny])
    rest = values[nx + ny + nt:]
    u = rest[: nt * ny * nx].reshape(nt, ny, nx)
    v = rest[nt * ny * nx:].reshape(nt, ny, nx)
    return GriddedField(xs, ys, ts, u, v)


def save_gridded(path, fld: GriddedField) -> None:
    nt, ny, nx = fld.u.shape
    lines = [f"{nx} {ny} {nt}"]
    for axis in (fld.x, fld.y, fld.t):
        lines.append(" ".join(repr(float(a)) for a in axis))
    for arr in (fld.u, fld.v):
        for block in arr:
            for row in block:
                lines.append(" ".join(repr(float(a)) for a in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def gridded_from_provider(provider: FlowProvider, xs: Sequence[float], ys: Sequence[float],
                          ts: Sequence[float]) -> GriddedField:
    """Sample any provider onto a lattice, e.g. to export the jet in gridded form."""
    T, Y, X = np.meshgrid(np.asarray(ts, float), np.asarray(ys, float), np.asarray(xs, float),
                          indexing="ij")
    u, v = provider.velocity(X, Y, T)
    return GriddedField(np.asarray(xs, float), np.asarray(ys, float), np.asarray(ts, float), u, v)
