"""Empirical audits of properties the search relies on but does not prove.

* FIFO: departing later along an edge should never arrive earlier. Label-setting
  optimality in time-dependent graphs depends on it.
* Containment: corner parameter sets need not bracket interior extrema, so the
  robust interval may miss the nominal arrival. We count, not assert.
"""
from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from ..flowfield import FlowProvider, JetFlow
from ..graph import neighbourhood_offsets
from ..transit import CostInterval, TransitConfig, edge_transit_time, robust_edge_cost
from ..uncertainty import UncertaintyDomain

Region = Tuple[float, float, float, float]


def _random_edges(rng, n, region, spacing, neighborhood):
    x0, x1, y0, y1 = region
    offsets = np.array(neighbourhood_offsets(neighborhood), dtype=float) * spacing
    pick = offsets[rng.integers(len(offsets), size=n)]
    starts = np.column_stack([rng.uniform(x0, x1, n), rng.uniform(y0, y1, n)])
    return starts, starts + pick


def fifo_audit(n_edges: int = 1000, seed: int = 0, provider: FlowProvider = None,
               region: Region = (0.0, 12.0, -4.0, 4.0), spacing: float = 0.2,
               neighborhood: int = 16, horizon: float = 50.0, max_gap: float = 2.0,
               tol: float = 1e-9, cfg: TransitConfig = TransitConfig()) -> dict:
    """Check arrival(t1) <= arrival(t2) + tol for random edges and departures t1 < t2."""
    provider = provider or JetFlow()
    rng = np.random.default_rng(seed)
    p0, p1 = _random_edges(rng, n_edges, region, spacing, neighborhood)
    t1 = rng.uniform(0.0, horizon, n_edges)
    t2 = t1 + rng.uniform(0.0, max_gap, n_edges)
    violations = []
    skipped = 0
    for a, b, s1, s2 in zip(p0, p1, t1, t2):
        w1 = edge_transit_time(a, b, s1, provider, cfg=cfg)
        w2 = edge_transit_time(a, b, s2, provider, cfg=cfg)
        if math.isinf(w1) or math.isinf(w2):
            skipped += 1
            continue
        excess = (s1 + w1) - (s2 + w2)
        if excess > tol:
            violations.append({"from": a.tolist(), "to": b.tolist(), "t1": float(s1), "t2": float(s2),
                               "excess": float(excess)})
    checked = n_edges - skipped
    return {
        "edges": n_edges,
        "checked": checked,
        "impassable": skipped,
        "violations": violations,
        "violation_rate": len(violations) / checked if checked else 0.0,
    }


def containment_audit(n_edges: int = 500, variance_pct: float = 5.0, seed: int = 0,
                      provider: FlowProvider = None, region: Region = (0.0, 12.0, -4.0, 4.0),
                      spacing: float = 0.2, neighborhood: int = 16, horizon: float = 50.0,
                      cfg: TransitConfig = TransitConfig()) -> dict:
    """Count edges whose robust interval misses the nominal-parameter arrival."""
    provider = provider or JetFlow()
    domain = UncertaintyDomain.from_percent(variance_pct)
    rng = np.random.default_rng(seed)
    p0, p1 = _random_edges(rng, n_edges, region, spacing, neighborhood)
    t = rng.uniform(0.0, horizon, n_edges)
    misses = []
    checked = 0
    for a, b, s in zip(p0, p1, t):
        iv = robust_edge_cost(a, b, CostInterval(s, s), provider, domain, cfg)
        w = edge_transit_time(a, b, s, provider, cfg=cfg)
        if iv is None or math.isinf(w):
            continue
        checked += 1
        if not iv.lo <= s + w <= iv.hi:
            misses.append({"from": a.tolist(), "to": b.tolist(), "t": float(s),
                           "nominal": float(s + w), "interval": [iv.lo, iv.hi]})
    return {"edges": n_edges, "checked": checked, "misses": misses}
