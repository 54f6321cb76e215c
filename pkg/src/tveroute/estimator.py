"""scikit-learn style front-end: fit on a current field, predict goal arrival times."""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import ConfigurationError
from .flowfield import FlowProvider, JetFlow, max_speed_bound
from .graph import GridSpec, build_grid, nearest_vertex
from .search import SearchConfig, SearchResult, search
from .transit import TransitConfig
from .uncertainty import UncertaintyDomain


class RoutePlanner(TransformerMixin, BaseEstimator):
    """Plan time-optimal routes to a fixed goal through a time-varying current.

    ``fit`` takes a :class:`~tveroute.flowfield.FlowProvider` (the analytic jet
    when None) and builds the lattice graph. ``predict`` maps an ``(n, 2)``
    array of start positions to the worst-case goal arrival time (NaN when the
    goal is unreachable); ``transform`` returns the full ``[lo, hi]`` arrival
    interval per start.
    """

    def __init__(self, algorithm="RZA*TVE", variance=5.0, goal=(11.0, 3.0), t0=0.0,
                 x_min=0.0, x_max=12.0, y_min=-4.0, y_max=4.0, nx=61, ny=41, neighborhood=16,
                 n_seg=8, tau=0.5, v_veh_bf=0.5, delta_phi_max=math.pi / 4):
        self.algorithm = algorithm
        self.variance = variance
        self.goal = goal
        self.t0 = t0
        self.x_min = x_min
        self.x_max = x_max
        self.y_min = y_min
        self.y_max = y_max
        self.nx = nx
        self.ny = ny
        self.neighborhood = neighborhood
        self.n_seg = n_seg
        self.tau = tau
        self.v_veh_bf = v_veh_bf
        self.delta_phi_max = delta_phi_max

    def fit(self, X=None, y=None):
        provider = JetFlow() if X is None else X
        if not isinstance(provider, FlowProvider):
            raise TypeError("fit expects a FlowProvider (or None for the default jet)")
        spec = GridSpec(self.x_min, self.x_max, self.y_min, self.y_max,
                        self.nx, self.ny, self.neighborhood)
        self.provider_ = provider
        self.graph_ = build_grid(spec)
        self.goal_vertex_ = nearest_vertex(self.graph_, self.goal)
        self.v_c_max_ = max_speed_bound(provider, spec.region, (self.t0, self.t0 + 50.0))
        self.config_ = SearchConfig.for_algorithm(
            self.algorithm, goal=self.goal_vertex_, t0=self.t0,
            uncertainty=UncertaintyDomain.from_percent(self.variance),
            transit=TransitConfig(self.n_seg, self.tau, self.v_veh_bf),
            delta_phi_max=self.delta_phi_max, v_c_max=self.v_c_max_,
        )
        return self

    def plan(self, start) -> SearchResult:
        check_is_fitted(self, "graph_")
        try:
            s = nearest_vertex(self.graph_, start)
        except ConfigurationError as exc:
            raise ValueError(str(exc)) from exc
        return search(self.graph_, self.provider_, s, self.config_)

    def transform(self, X):
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected start positions of shape (n, 2), got {X.shape}")
        out = np.full((X.shape[0], 2), np.nan)
        for i, p in enumerate(X):
            res = self.plan(p)
            if res.reached:
                out[i] = res.goal_interval.lo, res.goal_interval.hi
        return out

    def predict(self, X):
        return self.transform(X)[:, 1]
