"""Robust time-optimal route planning through time-varying currents."""
from .counters import CallCounters
from .errors import ConfigurationError, DomainError
from .estimator import RoutePlanner
from .flowfield import (
    FlowSample,
    GriddedField,
    JetFlow,
    JetParams,
    UniformFlow,
    flow_at,
    flow_jacobian,
    load_gridded,
    max_speed_bound,
    meander_amplitude,
    save_gridded,
    stream_value,
)
from .graph import GridGraph, GridSpec, build_grid, nearest_vertex
from .search import (
    ALGORITHMS,
    SearchConfig,
    SearchResult,
    angle_within,
    calc_opt_dir,
    calc_path_dir,
    calc_unc_opt_dir,
    reconstruct_path,
    search,
)
from .transit import (
    IMPASSABLE,
    CostInterval,
    TransitConfig,
    edge_transit_time,
    ground_speed,
    heuristic_h,
    robust_edge_cost,
)
from .uncertainty import (
    NOMINAL,
    ParameterSet,
    UncertaintyDomain,
    corner_sets,
    perturb_flow,
    perturb_speed,
)

__version__ = "0.1.0"
