"""Label-setting search over time-varying edge costs.

One engine covers the whole TVE family through three switches:

* ``robust``    propagate arrival intervals via the robust cost function (R-)
* ``heuristic`` order the queue by ``d+ + h`` and stop at the goal (A*)
* ``gating``    only expand successor edges aligned with an optimal heading
  estimated from Zermelo's navigation equation (Z)

Labels start UNREACHED (``+inf``, no predecessor). The queue uses lazy
re-insertion: a decreased key pushes a fresh entry and stale entries are
skipped, so ties resolve by insertion sequence.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .counters import CallCounters
from .errors import ConfigurationError
from .flowfield import FlowProvider, jacobian_arrays, max_speed_bound
from .graph import GridGraph
from .transit import (
    CostInterval,
    TransitConfig,
    robust_arrivals,
    set_factors,
    start_times,
)
from .uncertainty import NOMINAL, ParameterSet, UncertaintyDomain, corner_sets

WHITE, GRAY, BLACK = 0, 1, 2

ALGORITHMS = {
    "TVE": (False, False, False),
    "A*TVE": (False, True, False),
    "ZTVE": (False, False, True),
    "ZA*TVE": (False, True, True),
    "RTVE": (True, False, False),
    "RA*TVE": (True, True, False),
    "RZTVE": (True, False, True),
    "RZA*TVE": (True, True, True),
}

#: non-robust twin of every robust algorithm
TWINS = {"RTVE": "TVE", "RA*TVE": "A*TVE", "RZTVE": "ZTVE", "RZA*TVE": "ZA*TVE"}


@dataclass(frozen=True)
class SearchConfig:
    robust: bool = False
    heuristic: bool = False
    gating: bool = False
    delta_phi_max: float = math.pi / 4
    goal: Optional[int] = None
    t0: float = 0.0
    uncertainty: UncertaintyDomain = field(default_factory=UncertaintyDomain)
    transit: TransitConfig = field(default_factory=TransitConfig)
    #: current-speed bound for the heuristic; estimated from the field when None
    v_c_max: Optional[float] = None
    speed_bound_horizon: float = 50.0
    jacobian_step: float = 1e-4

    def __post_init__(self):
        if not 0 < self.delta_phi_max <= math.pi:
            raise ConfigurationError("delta_phi_max must lie in (0, pi]")
        if (self.heuristic or self.gating) and self.goal is None:
            raise ConfigurationError("heuristic and gated searches need a goal vertex")

    @classmethod
    def for_algorithm(cls, name: str, **kwargs) -> SearchConfig:
        try:
            robust, heuristic, gating = ALGORITHMS[name]
        except KeyError:
            raise ConfigurationError(
                f"unknown algorithm {name!r}; expected one of {sorted(ALGORITHMS)}"
            ) from None
        return cls(robust=robust, heuristic=heuristic, gating=gating, **kwargs)

    @property
    def name(self) -> str:
        flags = (self.robust, self.heuristic, self.gating)
        return next(k for k, v in ALGORITHMS.items() if v == flags)


@dataclass(frozen=True)
class VertexLabel:
    color: int
    interval: Optional[CostInterval]
    f: float
    pred: Optional[int]


@dataclass
class SearchResult:
    source: int
    goal: Optional[int]
    color: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    f: np.ndarray
    pred: np.ndarray
    reached: bool
    path: List[int]
    intervals: List[CostInterval]
    counters: CallCounters
    #: (vertex, lo, hi) recorded at each extraction
    trace: List[Tuple[int, float, float]] = field(default_factory=list)

    def label(self, v: int) -> VertexLabel:
        interval = CostInterval(self.lo[v], self.hi[v]) if math.isfinite(self.hi[v]) else None
        pred = int(self.pred[v]) if self.pred[v] >= 0 else None
        return VertexLabel(int(self.color[v]), interval, float(self.f[v]), pred)

    @property
    def goal_interval(self) -> Optional[CostInterval]:
        return self.intervals[-1] if self.reached else None


def calc_path_dir(p_u, p_v) -> float:
    """Direction of the edge ``p_u -> p_v`` in (-pi, pi]."""
    if tuple(p_u) == tuple(p_v):
        raise ValueError("edge endpoints coincide")
    a = math.atan2(p_v[1] - p_u[1], p_v[0] - p_u[0])
    return math.pi if a == -math.pi else a


def angle_within(a: float, b: float, tol: float) -> bool:
    """True if ``a`` and ``b`` differ by less than ``tol`` on the circle.

    ``tol >= pi`` admits every direction, including the exact opposite.
    """
    return tol >= math.pi or abs(math.remainder(a - b, 2 * math.pi)) < tol


def optimal_directions(p_pred, p_u, t_depart, t_arrive, provider: FlowProvider,
                       sets: Sequence[ParameterSet], v_veh_bf: float, n_seg: int,
                       step: float = 1e-4, counters: Optional[CallCounters] = None):
    """Vectorised Zermelo heading estimate for matched departure/arrival/set arrays.

    Returns ``(angles, degenerate)``; ``degenerate`` marks entries whose crab
    heading at departure does not exist (angles there are meaningless).
    """
    t_dep = np.asarray(t_depart, dtype=float)
    t_arr = np.asarray(t_arrive, dtype=float)
    fu, fv, speed = set_factors(sets, v_veh_bf)
    x0, y0 = float(p_pred[0]), float(p_pred[1])
    x1, y1 = float(p_u[0]), float(p_u[1])
    dx, dy = x1 - x0, y1 - y0
    length = math.hypot(dx, dy)
    ex, ey = dx / length, dy / length
    psi = math.atan2(dy, dx)

    u, v = provider.velocity(np.full(t_dep.shape, x0), np.full(t_dep.shape, y0), t_dep)
    u = u * fu
    v = v * fv
    cross = v * ex - u * ey
    along = u * ex + v * ey
    disc = speed * speed - cross * cross
    degenerate = disc <= 0
    degenerate |= np.sqrt(np.where(degenerate, 0.0, disc)) + along <= 0
    theta = psi - np.arcsin(np.clip(cross / speed, -1.0, 1.0))

    # sample points do not depend on the heading, so all Jacobians go in one batch
    dt = (t_arr - t_dep) / n_seg
    frac = (np.arange(n_seg)[:, None] + 0.5) / n_seg
    steps = np.arange(n_seg)[:, None]
    ux, uy, vx, vy = jacobian_arrays(provider, x0 + frac * dx, y0 + frac * dy,
                                     t_dep + steps * dt, step)
    ux, uy, vx, vy = ux * fu, uy * fu, vx * fv, vy * fv
    for i in range(n_seg):
        s, c = np.sin(theta), np.cos(theta)
        theta = theta + dt * (s * s * vx[i] + s * c * (ux[i] - vy[i]) - c * c * uy[i])

    u, v = provider.velocity(np.full(t_arr.shape, x1), np.full(t_arr.shape, y1), t_arr)
    u = u * fu
    v = v * fv
    gx = speed * np.cos(theta) + u
    gy = speed * np.sin(theta) + v
    if counters is not None:
        counters.cmc += int(t_dep.size) * (2 + 8 * n_seg)
    return np.arctan2(gy, gx), degenerate


def calc_opt_dir(p_pred, p_u, t_depart: float, t_arrive: float, provider: FlowProvider,
                 pset: ParameterSet = NOMINAL, cfg: TransitConfig = TransitConfig(),
                 step: float = 1e-4, counters: Optional[CallCounters] = None) -> float:
    """Ground-track direction at ``p_u`` of a Zermelo-optimal heading carried along the edge.

    Falls back to the edge direction when no crab heading exists at departure.
    """
    if not (math.isfinite(t_arrive) and t_arrive > t_depart):
        raise ValueError("arrival must be finite and follow departure")
    angles, bad = optimal_directions(p_pred, p_u, [t_depart], [t_arrive], provider, [pset],
                                     cfg.v_veh_bf, cfg.n_seg, step, counters)
    if bad[0]:
        return calc_path_dir(p_pred, p_u)
    return float(angles[0])


def _uncertain_combos(interval_pred: CostInterval, interval_u: CostInterval,
                      sets: Sequence[ParameterSet]):
    pairs = [(interval_pred.lo, interval_u.lo), (interval_pred.hi, interval_u.hi)]
    if pairs[0] == pairs[1]:
        pairs = pairs[:1]
    dep = [p[0] for p in pairs for _ in sets]
    arr = [p[1] for p in pairs for _ in sets]
    return dep, arr, [s for _ in pairs for s in sets]


def calc_unc_opt_dir(p_pred, p_u, interval_pred: CostInterval, interval_u: CostInterval,
                     provider: FlowProvider, domain: UncertaintyDomain,
                     cfg: TransitConfig = TransitConfig(), step: float = 1e-4,
                     counters: Optional[CallCounters] = None) -> List[float]:
    """Optimal directions for every corner set and both (lo, lo), (hi, hi) time pairs.

    Ordered by time pair, then corner set. Identical pairs collapse to one.
    """
    dep, arr, sets = _uncertain_combos(interval_pred, interval_u, corner_sets(domain))
    angles, bad = optimal_directions(p_pred, p_u, dep, arr, provider, sets, cfg.v_veh_bf,
                                     cfg.n_seg, step, counters)
    fallback = calc_path_dir(p_pred, p_u)
    return [fallback if b else float(a) for a, b in zip(angles, bad)]


def reconstruct_path(pred: Sequence[int], s: int, g: int) -> List[int]:
    path = [g]
    while path[-1] != s:
        p = int(pred[path[-1]])
        if p < 0 or len(path) > len(pred):
            raise ValueError(f"vertex {g} is not reached from {s}")
        path.append(p)
    return path[::-1]


def _heuristic_table(g: GridGraph, provider: FlowProvider, cfg: SearchConfig) -> np.ndarray:
    if not cfg.heuristic:
        return np.zeros(g.n_vertices)
    dom = cfg.uncertainty
    v_c = cfg.v_c_max
    if v_c is None:
        v_c = max_speed_bound(provider, g.spec.region, (cfg.t0, cfg.t0 + cfg.speed_bound_horizon))
    v_c *= 1.0 + max(dom.rel_var_u, dom.rel_var_v)
    v_veh = cfg.transit.v_veh_bf * (1.0 + dom.rel_var_speed)
    goal = g.positions[cfg.goal]
    return np.hypot(g.positions[:, 0] - goal[0], g.positions[:, 1] - goal[1]) / (v_veh + v_c)


def search(g: GridGraph, provider: FlowProvider, s: int, cfg: SearchConfig,
           counters: Optional[CallCounters] = None) -> SearchResult:
    """Run the configured TVE-family search from vertex ``s`` departing at ``cfg.t0``."""
    n = g.n_vertices
    if not 0 <= s < n:
        raise ConfigurationError(f"source {s} is not a vertex")
    if cfg.goal is not None and not 0 <= cfg.goal < n:
        raise ConfigurationError(f"goal {cfg.goal} is not a vertex")
    counters = CallCounters() if counters is None else counters
    goal = cfg.goal
    tcfg = cfg.transit
    sets = corner_sets(cfg.uncertainty) if cfg.robust else [NOMINAL]
    h = _heuristic_table(g, provider, cfg)
    early_exit = cfg.heuristic or cfg.gating
    pos = g.positions

    color = np.full(n, WHITE, dtype=np.int8)
    lo = np.full(n, np.inf)
    hi = np.full(n, np.inf)
    f = np.full(n, np.inf)
    pred = np.full(n, -1, dtype=np.int64)
    entry = np.full(n, -1, dtype=np.int64)
    trace = []

    lo[s] = hi[s] = cfg.t0
    f[s] = cfg.t0 + h[s]
    color[s] = GRAY
    seq = 0
    queue = [(f[s], seq, s)]
    entry[s] = seq

    while queue:
        _, k, u = heapq.heappop(queue)
        if entry[u] != k:
            continue
        entry[u] = -1
        if early_exit and u == goal:
            break
        color[u] = BLACK
        trace.append((u, lo[u], hi[u]))

        adj = g.adjacency[u]
        cand = adj[(color[adj] != BLACK) & (hi[u] < hi[adj])]
        if cfg.gating and u != s and cand.size:
            cand = _gate(g, provider, cfg, sets, u, int(pred[u]), lo, hi, cand, counters)
        if not cand.size:
            continue

        if cfg.robust:
            starts = start_times(CostInterval(lo[u], hi[u]), tcfg.tau)
            counters.rcfc += int(cand.size)
        else:
            starts = np.array([lo[u]])
        new_lo, new_hi = robust_arrivals(provider, pos[u], pos[cand], starts, sets, tcfg, counters)

        for v, vlo, vhi in zip(cand.tolist(), new_lo.tolist(), new_hi.tolist()):
            if vhi < hi[v]:
                lo[v] = vlo
                hi[v] = vhi
                f[v] = vhi + h[v]
                pred[v] = u
                color[v] = GRAY
                seq += 1
                entry[v] = seq
                heapq.heappush(queue, (f[v], seq, v))

    reached = goal is not None and math.isfinite(hi[goal])
    path: List[int] = []
    intervals: List[CostInterval] = []
    if reached:
        path = reconstruct_path(pred, s, goal)
        intervals = [CostInterval(float(lo[v]), float(hi[v])) for v in path]
    return SearchResult(s, goal, color, lo, hi, f, pred, reached, path, intervals,
                        counters.snapshot(), trace)


def _gate(g, provider, cfg, sets, u, p, lo, hi, cand, counters):
    """Filter successors of ``u`` to those aligned with any optimal direction."""
    tcfg = cfg.transit
    dep, arr, combo_sets = _uncertain_combos(CostInterval(lo[p], hi[p]),
                                             CostInterval(lo[u], hi[u]), sets)
    angles, bad = optimal_directions(g.positions[p], g.positions[u], dep, arr, provider,
                                     combo_sets, tcfg.v_veh_bf, tcfg.n_seg,
                                     cfg.jacobian_step, counters)
    if bad.any() or cfg.delta_phi_max >= math.pi:
        return cand
    pu = g.positions[u]
    keep = [
        any(angle_within(float(a), calc_path_dir(pu, g.positions[v]), cfg.delta_phi_max)
            for a in angles)
        for v in cand.tolist()
    ]
    return cand[np.array(keep, dtype=bool)]
