"""Edge traversal times through a current field.

The weight function (``wfunc``) integrates a vehicle holding a straight ground
track across ``n_seg`` sub-segments: the flow is sampled at each sub-segment
midpoint at the running departure time, the vehicle crabs against the
cross-track current, and time advances by sub-length over ground speed.

The robust cost function (``ufunc``) maps a departure interval to an arrival
interval by running the weight function for every (start time, corner set)
pair and taking the extreme arrivals.

Both routes share one vectorised kernel, :func:`transit_kernel`, so scalar and
batched evaluations of the same edge are bitwise identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .counters import CallCounters
from .errors import ConfigurationError
from .flowfield import FlowProvider, FlowSample
from .uncertainty import NOMINAL, ParameterSet, UncertaintyDomain, corner_sets, perturb_speed

#: duration returned for an edge the vehicle cannot traverse
IMPASSABLE = math.inf


@dataclass(frozen=True)
class CostInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval lower bound {self.lo} exceeds upper bound {self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi


@dataclass(frozen=True)
class TransitConfig:
    n_seg: int = 8
    tau: float = 0.5
    v_veh_bf: float = 0.5

    def __post_init__(self):
        if int(self.n_seg) != self.n_seg or self.n_seg < 1:
            raise ConfigurationError(f"n_seg must be a positive integer, got {self.n_seg}")
        if not self.tau > 0:
            raise ConfigurationError(f"tau must be positive, got {self.tau}")
        if not self.v_veh_bf > 0:
            raise ConfigurationError(f"v_veh_bf must be positive, got {self.v_veh_bf}")


def ground_speed(edge_dir: Tuple[float, float], current: FlowSample, v_veh: float) -> Optional[float]:
    """Speed over ground along ``edge_dir`` while crabbing; None if impassable."""
    ex, ey = edge_dir
    along = current.u * ex + current.v * ey
    cross = current.v * ex - current.u * ey
    if v_veh <= abs(cross):
        return None
    s = math.sqrt(v_veh * v_veh - cross * cross) + along
    return s if s > 0 else None


def set_factors(sets: Sequence[ParameterSet], v_veh_bf: float):
    """Per-set multipliers (u, v) and perturbed speeds as 1-D arrays."""
    fu = np.array([p.u_factor for p in sets])
    fv = np.array([p.v_factor for p in sets])
    speed = np.array([perturb_speed(v_veh_bf, p) for p in sets])
    return fu, fv, speed


def transit_kernel(provider: FlowProvider, x0, y0, x1, y1, t_start, fu, fv, speed, n_seg: int,
                   counters: Optional[CallCounters] = None):
    """Elapsed traversal times for broadcastable edge/start/set arrays.

    Returns an array of the broadcast shape holding ``inf`` where some
    sub-segment is impassable. Charges one CFC per element and ``n_seg`` CMC
    per element.
    """
    dx = x1 - x0
    dy = y1 - y0
    length = np.hypot(dx, dy)
    ex = dx / length
    ey = dy / length
    sub = length / n_seg
    t_start = np.asarray(t_start, dtype=float)
    shape = np.broadcast_shapes(np.shape(x0), np.shape(x1), t_start.shape, np.shape(fu))
    elapsed = np.zeros(shape)
    ok = np.ones(shape, dtype=bool)
    speed2 = speed * speed
    for i in range(n_seg):
        frac = (i + 0.5) / n_seg
        u, v = provider.velocity(x0 + frac * dx, y0 + frac * dy, t_start + elapsed)
        u = u * fu
        v = v * fv
        along = u * ex + v * ey
        cross = v * ex - u * ey
        disc = speed2 - cross * cross
        ok &= disc > 0
        s = np.sqrt(np.where(ok, disc, 0.0)) + along
        ok &= s > 0
        elapsed = np.where(ok, elapsed + sub / np.where(ok, s, 1.0), elapsed)
    n = int(np.prod(shape))
    if counters is not None:
        counters.cfc += n
        counters.cmc += n * n_seg
    return np.where(ok, elapsed, np.inf)


def edge_transit_time(p_u, p_v, t_start: float, provider: FlowProvider,
                      pset: ParameterSet = NOMINAL, cfg: TransitConfig = TransitConfig(),
                      counters: Optional[CallCounters] = None) -> float:
    """Weight function: travel time from ``p_u`` to ``p_v`` departing at ``t_start``.

    Returns :data:`IMPASSABLE` (``inf``) when the current defeats the vehicle.
    """
    if tuple(p_u) == tuple(p_v):
        raise ValueError("edge endpoints coincide")
    fu, fv, speed = set_factors([pset], cfg.v_veh_bf)
    dur = transit_kernel(provider, np.array([p_u[0]]), np.array([p_u[1]]),
                         np.array([p_v[0]]), np.array([p_v[1]]), np.array([t_start]),
                         fu, fv, speed, cfg.n_seg, counters)
    return float(dur[0])


def start_times(interval: CostInterval, tau: float) -> np.ndarray:
    """Departure times sampled across ``interval`` with spacing at most ``tau``."""
    if interval.degenerate:
        return np.array([interval.lo])
    n_inner = max(math.ceil(interval.width / tau) - 1, 0)
    return np.linspace(interval.lo, interval.hi, n_inner + 2)


def robust_arrivals(provider: FlowProvider, p_from, p_to: np.ndarray, starts: np.ndarray,
                    sets: Sequence[ParameterSet], cfg: TransitConfig,
                    counters: Optional[CallCounters] = None):
    """Arrival bounds for several edges leaving ``p_from`` over a shared start list.

    ``p_to`` has shape (E, 2). Returns ``(lo, hi)`` arrays of length E with
    ``inf`` in both for edges where any evaluation is impassable. RCFC is left
    to the caller, since the non-robust search also routes through here.
    """
    p_to = np.asarray(p_to, dtype=float).reshape(-1, 2)
    fu, fv, speed = set_factors(sets, cfg.v_veh_bf)
    starts = np.asarray(starts, dtype=float)[None, :, None]
    dur = transit_kernel(
        provider,
        np.full((p_to.shape[0], 1, 1), float(p_from[0])),
        np.full((p_to.shape[0], 1, 1), float(p_from[1])),
        p_to[:, 0, None, None], p_to[:, 1, None, None],
        starts, fu[None, None, :], fv[None, None, :], speed[None, None, :],
        cfg.n_seg, counters,
    )
    arrival = (starts + dur).reshape(p_to.shape[0], -1)
    blocked = ~np.all(np.isfinite(arrival), axis=1)
    lo = np.where(blocked, np.inf, arrival.min(axis=1))
    hi = np.where(blocked, np.inf, arrival.max(axis=1))
    return lo, hi


def robust_edge_cost(p_u, p_v, d_interval: CostInterval, provider: FlowProvider,
                     domain: UncertaintyDomain, cfg: TransitConfig = TransitConfig(),
                     counters: Optional[CallCounters] = None) -> Optional[CostInterval]:
    """Robust cost function: arrival interval at ``p_v`` for a departure interval at ``p_u``.

    Returns None when any (start, corner set) evaluation is impassable.
    """
    if tuple(p_u) == tuple(p_v):
        raise ValueError("edge endpoints coincide")
    starts = start_times(d_interval, cfg.tau)
    lo, hi = robust_arrivals(provider, p_u, np.array([p_v], dtype=float), starts,
                             corner_sets(domain), cfg, counters)
    if counters is not None:
        counters.rcfc += 1
    if not np.isfinite(hi[0]):
        return None
    return CostInterval(float(lo[0]), float(hi[0]))


def heuristic_h(p, goal, v_veh: float, v_c_max: float) -> float:
    """Lower bound on travel time: straight-line distance at the best possible speed."""
    if not v_veh + v_c_max > 0:
        raise ConfigurationError("v_veh + v_c_max must be positive")
    return math.hypot(goal[0] - p[0], goal[1] - p[1]) / (v_veh + v_c_max)
