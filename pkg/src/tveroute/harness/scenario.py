"""Scenario configuration: a TOML file mirroring :class:`Scenario` field for field."""
from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ConfigurationError
from ..flowfield import FlowProvider, JetFlow, JetParams, load_gridded
from ..graph import GridSpec
from ..search import ALGORITHMS
from ..transit import TransitConfig

Point = Tuple[float, float]


@dataclass(frozen=True)
class Scenario:
    grid: GridSpec
    starts: Tuple[Point, ...]
    goal: Point
    flow_kind: str = "jet"
    jet: JetParams = field(default_factory=JetParams)
    field_path: Optional[str] = None
    t0: float = 0.0
    #: percentage used by plan and bench
    variance: float = 5.0
    #: percentages visited by the variance sweep
    sweep: Tuple[float, ...] = (0.0, 2.5, 5.0, 10.0, 15.0)
    algorithms: Tuple[str, ...] = ("RTVE", "RA*TVE", "RZTVE", "RZA*TVE")
    transit: TransitConfig = field(default_factory=TransitConfig)
    delta_phi_max: float = math.pi / 4
    workers: int = 1

    def __post_init__(self):
        if not self.starts:
            raise ConfigurationError("scenario needs at least one start position")
        g = self.grid
        for label, (x, y) in [("goal", self.goal)] + [(f"start {i}", p) for i, p in enumerate(self.starts)]:
            if not (g.x_min <= x <= g.x_max and g.y_min <= y <= g.y_max):
                raise ConfigurationError(f"{label} ({x}, {y}) lies outside the grid region")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ConfigurationError(f"unknown algorithm {name!r}")
        if self.flow_kind not in ("jet", "gridded"):
            raise ConfigurationError(f"flow kind must be 'jet' or 'gridded', got {self.flow_kind!r}")
        if self.flow_kind == "gridded" and not self.field_path:
            raise ConfigurationError("gridded flow needs a field path")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")

    def provider(self) -> FlowProvider:
        if self.flow_kind == "jet":
            return JetFlow(self.jet)
        return _load_field(self.field_path)

    def echo(self) -> dict:
        d = asdict(self)
        d["starts"] = [list(p) for p in self.starts]
        d["goal"] = list(self.goal)
        d["sweep"] = list(self.sweep)
        d["algorithms"] = list(self.algorithms)
        return d


@lru_cache(maxsize=8)
def _load_field(path: str):
    return load_gridded(path)


def reference_scenario(**overrides) -> Scenario:
    """The desk-scale meandering-jet scenario shipped in ``scenarios/reference.toml``."""
    base = dict(
        grid=GridSpec(0.0, 12.0, -4.0, 4.0, 61, 41, 16),
        starts=((0.5, -3.0), (0.5, 0.0), (0.5, 3.0), (3.0, -3.0), (6.0, -3.0)),
        goal=(11.0, 3.0),
    )
    base.update(overrides)
    return Scenario(**base)


def _section(doc: dict, name: str, where: str) -> dict:
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigurationError(f"{where}: [{name}] must be a table")
    return sec


def load_scenario(path) -> Scenario:
    path = Path(path)
    where = str(path)
    try:
        doc = tomllib.loads(path.read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigurationError(f"{where}: {exc}") from exc

    flow = _section(doc, "flow", where)
    grid = _section(doc, "grid", where)
    route = _section(doc, "route", where)
    unc = _section(doc, "uncertainty", where)
    srch = _section(doc, "search", where)
    trans = _section(doc, "transit", where)
    run = _section(doc, "run", where)

    try:
        field_path = flow.get("path")
        if field_path is not None:
            field_path = str((path.parent / field_path).resolve())
        kw = dict(
            flow_kind=flow.get("kind", "jet"),
            jet=JetParams(**flow.get("jet", {})),
            field_path=field_path,
            grid=GridSpec(**grid),
            starts=tuple((float(x), float(y)) for x, y in route["starts"]),
            goal=tuple(float(c) for c in route["goal"]),
            t0=float(route.get("t0", 0.0)),
            transit=TransitConfig(**trans),
            workers=int(run.get("workers", 1)),
        )
        if "variance" in unc:
            kw["variance"] = float(unc["variance"])
        if "sweep" in unc:
            kw["sweep"] = tuple(float(v) for v in unc["sweep"])
        if "algorithms" in srch:
            kw["algorithms"] = tuple(srch["algorithms"])
        if "delta_phi_max" in srch:
            kw["delta_phi_max"] = float(srch["delta_phi_max"])
        return Scenario(**kw)
    except KeyError as exc:
        raise ConfigurationError(f"{where}: missing required key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{where}: {exc}") from exc
