"""Experiment runners: single plans, benchmarks, sweeps, the brute-force oracle.

Independent runs fan out over a process pool; results are merged in task
order, so reports do not depend on the worker count.
"""
from __future__ import annotations

import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from ..counters import CallCounters
from ..flowfield import JetFlow, flow_at
from ..graph import GridSpec, build_grid, nearest_vertex
from ..search import ALGORITHMS, SearchConfig, search
from ..transit import TransitConfig, edge_transit_time
from ..uncertainty import UncertaintyDomain
from .scenario import Scenario

log = logging.getLogger(__name__)

TABLE_ORDER = ("RTVE", "RA*TVE", "RZTVE", "RZA*TVE", "TVE", "A*TVE", "ZTVE", "ZA*TVE")


def fmt(x: float) -> Optional[float]:
    """Round to 12 significant digits; non-finite values become None."""
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def parallel_map(func: Callable, tasks: Sequence, workers: int = 1) -> List:
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(func, tasks))


def run_plan(scenario: Scenario, algorithm: str, start_index: int = 0,
             variance: Optional[float] = None, t0: Optional[float] = None) -> dict:
    """Plan one route and return its report record."""
    variance = scenario.variance if variance is None else variance
    t0 = scenario.t0 if t0 is None else t0
    g = build_grid(scenario.grid)
    provider = scenario.provider()
    s = nearest_vertex(g, scenario.starts[start_index])
    goal = nearest_vertex(g, scenario.goal)
    cfg = SearchConfig.for_algorithm(
        algorithm, goal=goal, t0=t0,
        uncertainty=UncertaintyDomain.from_percent(variance),
        transit=scenario.transit, delta_phi_max=scenario.delta_phi_max,
    )
    tic = time.perf_counter()
    res = search(g, provider, s, cfg)
    wall_ms = (time.perf_counter() - tic) * 1e3
    return {
        "algorithm": algorithm,
        "start_index": start_index,
        "variance_pct": variance,
        "t0": fmt(t0),
        "reached": res.reached,
        "path": [[fmt(c) for c in g.position(v)] for v in res.path],
        "intervals": [[fmt(iv.lo), fmt(iv.hi)] for iv in res.intervals],
        "goal_interval": [fmt(res.goal_interval.lo), fmt(res.goal_interval.hi)] if res.reached else None,
        "counters": res.counters.as_dict(),
        "wall_ms": round(wall_ms, 3),
    }


def _plan_task(args):
    return run_plan(*args)


def _report(scenario: Scenario, runs: List[dict], **extra) -> dict:
    rep = {"scenario": scenario.echo(), "runs": runs}
    rep.update(extra)
    return rep


def run_bench(scenario: Scenario, workers: Optional[int] = None,
              algorithms: Optional[Iterable[str]] = None,
              starts: Optional[Iterable[int]] = None) -> dict:
    """Counter comparison across algorithms and start positions at the scenario variance."""
    algs = [a for a in TABLE_ORDER if a in (algorithms or scenario.algorithms)]
    idx = list(range(len(scenario.starts))) if starts is None else list(starts)
    tasks = [(scenario, a, i, scenario.variance) for a in algs for i in idx]
    runs = parallel_map(_plan_task, tasks, workers or scenario.workers)
    table = {a: {f"SP{i + 1}": None for i in idx} for a in algs}
    for r in runs:
        table[r["algorithm"]][f"SP{r['start_index'] + 1}"] = r["counters"]
    return _report(scenario, runs, table=table)


def run_variance_sweep(scenario: Scenario, algorithm: str = "RZA*TVE",
                       workers: Optional[int] = None,
                       starts: Optional[Iterable[int]] = None) -> dict:
    """Feasibility and goal-interval width across the scenario's variance list."""
    idx = list(range(len(scenario.starts))) if starts is None else list(starts)
    tasks = [(scenario, algorithm, i, v) for i in idx for v in scenario.sweep]
    runs = parallel_map(_plan_task, tasks, workers or scenario.workers)
    trends = {}
    for i in idx:
        rows = [r for r in runs if r["start_index"] == i]
        widths = [r["goal_interval"][1] - r["goal_interval"][0] if r["reached"] else None for r in rows]
        feasible = [r["reached"] for r in rows]
        reached_widths = [w for w in widths if w is not None]
        trend = {
            "variance_pct": [r["variance_pct"] for r in rows],
            "feasible": feasible,
            "goal_width": [fmt(w) if w is not None else None for w in widths],
            "feasibility_non_increasing": all(a >= b for a, b in zip(feasible, feasible[1:])),
            "width_non_decreasing": all(a <= b for a, b in zip(reached_widths, reached_widths[1:])),
        }
        if not trend["feasibility_non_increasing"]:
            log.warning("start %d: feasibility is not monotone in variance: %s", i, feasible)
        trends[f"SP{i + 1}"] = trend
    return _report(scenario, runs, trends=trends)


def run_departure_sweep(scenario: Scenario, t0_list: Sequence[float], algorithm: str = "TVE",
                        start_index: int = 0, variance: Optional[float] = None,
                        workers: Optional[int] = None) -> dict:
    """One search per departure time; reports the travel-time curve and its argmin."""
    if not t0_list:
        raise ValueError("departure sweep needs at least one departure time")
    tasks = [(scenario, algorithm, start_index, variance, t0) for t0 in t0_list]
    runs = parallel_map(_plan_task, tasks, workers or scenario.workers)
    curve = []
    for r in runs:
        arrival = r["goal_interval"][1] if r["reached"] else None
        duration = fmt(arrival - r["t0"]) if arrival is not None else None
        curve.append({"t0": r["t0"], "arrival": arrival, "duration": duration})
    feasible = [c for c in curve if c["duration"] is not None]
    best = min(feasible, key=lambda c: c["duration"])["t0"] if feasible else None
    return _report(scenario, runs, departure={"curve": curve, "best_t0": best})


def enumerate_min_arrival(g, provider, s: int, goal: int, t0: float, transit):
    """Earliest goal arrival over every simple path, propagating edge times exhaustively.

    Returns ``(arrival, path, times)`` for the best path; ``(inf, [], [])`` when
    no simple path is passable.
    """
    best = (math.inf, [], [])
    path = [s]
    times = [t0]

    def dfs(u, t):
        nonlocal best
        if u == goal:
            if t < best[0]:
                best = (t, list(path), list(times))
            return
        for v in g.adjacency[u].tolist():
            if v in path:
                continue
            w = edge_transit_time(g.position(u), g.position(v), t, provider, cfg=transit)
            if math.isinf(w):
                continue
            path.append(v)
            times.append(t + w)
            dfs(v, t + w)
            path.pop()
            times.pop()

    dfs(s, t0)
    return best


def _oracle_instance(seed: int, nx: int, ny: int, neighborhood: int, spacing: Optional[float]):
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(0.0, 10.0)
    y0 = rng.uniform(-3.0, 2.5)
    if spacing is None:
        w, h = rng.uniform(0.3, 2.0, 2)
    else:
        w, h = spacing * (nx - 1), spacing * (ny - 1)
    t0 = float(rng.uniform(0.0, 30.0))
    return GridSpec(x0, x0 + w, y0, y0 + h, nx, ny, neighborhood), t0


def run_oracle_check(seeds: int = 100, nx: int = 3, ny: int = 3, neighborhood: int = 4,
                     algorithms: Sequence[str] = ("TVE", "A*TVE"), tol: float = 1e-9,
                     transit: Optional[TransitConfig] = None,
                     spacing: Optional[float] = 0.2) -> dict:
    """Compare non-robust searches against exhaustive simple-path enumeration.

    Each seed draws a random lattice position and departure time in the jet
    field; ``spacing=None`` also randomises the cell size. A mismatch is
    flagged ``fifo_violation`` when the enumerated optimum passes some vertex
    later than its earliest arrival label, the situation label-setting cannot
    represent.
    """
    if nx * ny > 12:
        raise ValueError("oracle graphs are limited to 12 vertices")
    transit = transit or TransitConfig()
    provider = JetFlow()
    cases = []
    max_dev = {a: 0.0 for a in algorithms}
    for seed in range(seeds):
        spec, t0 = _oracle_instance(seed, nx, ny, neighborhood, spacing)
        g = build_grid(spec)
        s, goal = 0, g.n_vertices - 1
        oracle, opath, otimes = enumerate_min_arrival(g, provider, s, goal, t0, transit)
        row = {"seed": seed, "t0": fmt(t0), "oracle": fmt(oracle)}
        for a in algorithms:
            res = search(g, provider, s, SearchConfig.for_algorithm(a, goal=goal, t0=t0, transit=transit))
            got = res.hi[goal]
            if math.isinf(got) and math.isinf(oracle):
                dev = 0.0
            elif math.isinf(got) or math.isinf(oracle):
                dev = math.inf
            else:
                dev = abs(got - oracle)
            max_dev[a] = max(max_dev[a], dev)
            row[a] = fmt(got)
            if dev >= tol:
                row.setdefault("fifo_violation", {})[a] = any(
                    t > res.hi[v] + tol for v, t in zip(opath, otimes)
                )
        cases.append(row)
    return {
        "seeds": seeds,
        "grid": [nx, ny],
        "neighborhood": neighborhood,
        "spacing": spacing,
        "max_abs_deviation": {a: (d if math.isfinite(d) else None) for a, d in max_dev.items()},
        "mismatches": [c for c in cases if "fifo_violation" in c],
        "passed": all(d < tol for d in max_dev.values()),
        "cases": cases,
    }


def emit_field(scenario: Scenario, times: Sequence[float], density: int = 20) -> List[dict]:
    """Current samples on a ``density x density`` lattice over the scenario region."""
    if density < 2:
        raise ValueError("lattice density must be at least 2")
    g = scenario.grid
    provider = scenario.provider()
    xs = np.linspace(g.x_min, g.x_max, density)
    ys = np.linspace(g.y_min, g.y_max, density)
    rows = []
    for t, y, x in itertools.product(times, ys, xs):
        u, v = flow_at(x, y, t, provider)
        rows.append({"x": float(x), "y": float(y), "t": float(t), "u": u, "v": v})
    return rows
