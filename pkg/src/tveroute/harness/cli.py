"""``tveroute`` command-line interface."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import List, Optional

import numpy as np

from ..errors import ConfigurationError, DomainError
from .audits import containment_audit, fifo_audit
from .runs import (
    emit_field,
    run_bench,
    run_departure_sweep,
    run_oracle_check,
    run_plan,
    run_variance_sweep,
)
from .scenario import load_scenario, reference_scenario

RUN_COLUMNS = ["algorithm", "start_index", "variance_pct", "t0", "reached",
               "goal_lo", "goal_hi", "rcfc", "cfc", "cmc", "wall_ms"]


def _floats(text: str) -> List[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _run_rows(runs):
    for r in runs:
        gi = r["goal_interval"] or [None, None]
        yield [r["algorithm"], r["start_index"], r["variance_pct"], r["t0"], r["reached"],
               gi[0], gi[1], r["counters"]["rcfc"], r["counters"]["cfc"], r["counters"]["cmc"],
               r["wall_ms"]]


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _common(p):
    p.add_argument("--config", help="scenario TOML file (default: built-in reference scenario)")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tveroute", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan a single route")
    _common(p)
    p.add_argument("--algorithm", default="RZA*TVE")
    p.add_argument("--start", type=int, default=0, help="start index into the scenario list")
    p.add_argument("--variance", type=float, help="error variance in percent")
    p.add_argument("--t0", type=float, help="departure time")

    p = sub.add_parser("bench", help="compare call counters across algorithms and starts")
    _common(p)
    p.add_argument("--algorithms", help="comma-separated subset of algorithms")
    p.add_argument("--starts", help="comma-separated start indices")

    p = sub.add_parser("sweep-variance", help="plan across the scenario variance list")
    _common(p)
    p.add_argument("--algorithm", default="RZA*TVE")
    p.add_argument("--starts", help="comma-separated start indices")

    p = sub.add_parser("sweep-departure", help="plan across departure times")
    _common(p)
    p.add_argument("--algorithm", default="TVE")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--variance", type=float)
    p.add_argument("--t0-list", help="comma-separated departure times")
    p.add_argument("--t0-count", type=int, default=8,
                   help="without --t0-list: this many departures over one jet period")

    p = sub.add_parser("oracle", help="check searches against exhaustive path enumeration")
    _common(p)
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--nx", type=int, default=3)
    p.add_argument("--ny", type=int, default=3)
    p.add_argument("--neighborhood", type=int, default=4)
    p.add_argument("--spacing", type=float, default=0.2,
                   help="lattice spacing; 0 draws a random cell size per seed")

    p = sub.add_parser("emit-field", help="dump current samples for plotting")
    _common(p)
    p.add_argument("--times", default="0", help="comma-separated sample times")
    p.add_argument("--density", type=int, default=20)

    p = sub.add_parser("audit", help="empirical FIFO and interval-containment audits")
    _common(p)
    p.add_argument("--edges", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _dispatch(args) -> str:
    scenario = load_scenario(args.config) if args.config else reference_scenario()
    fmt = args.format
    cmd = args.command

    if cmd == "plan":
        rec = run_plan(scenario, args.algorithm, args.start, args.variance, args.t0)
        if fmt == "csv":
            return to_csv(RUN_COLUMNS, _run_rows([rec]))
        return json.dumps({"scenario": scenario.echo(), "runs": [rec]}, indent=2)

    if cmd == "bench":
        algs = args.algorithms.split(",") if args.algorithms else None
        starts = [int(s) for s in args.starts.split(",")] if args.starts else None
        rep = run_bench(scenario, args.workers, algs, starts)
        if fmt == "csv":
            rows = [[alg, sp, c["rcfc"], c["cfc"], c["cmc"]]
                    for alg, cols in rep["table"].items() for sp, c in cols.items()]
            return to_csv(["algorithm", "start", "rcfc", "cfc", "cmc"], rows)
        return json.dumps(rep, indent=2)

    if cmd == "sweep-variance":
        starts = [int(s) for s in args.starts.split(",")] if args.starts else None
        rep = run_variance_sweep(scenario, args.algorithm, args.workers, starts)
        if fmt == "csv":
            rows = []
            for r in rep["runs"]:
                for k, (lo, hi) in enumerate(r["intervals"]):
                    rows.append([r["start_index"], r["variance_pct"], k, lo, hi])
            return to_csv(["start_index", "variance_pct", "waypoint", "lo", "hi"], rows)
        return json.dumps(rep, indent=2)

    if cmd == "sweep-departure":
        if args.t0_list:
            t0s = _floats(args.t0_list)
        else:
            period = scenario.jet.period if scenario.flow_kind == "jet" else 2 * math.pi / 0.4
            t0s = [float(t) for t in np.linspace(0.0, period, args.t0_count, endpoint=False)]
        rep = run_departure_sweep(scenario, t0s, args.algorithm, args.start, args.variance,
                                  args.workers)
        if fmt == "csv":
            curve = rep["departure"]["curve"]
            return to_csv(["t0", "arrival", "duration"],
                          [[c["t0"], c["arrival"], c["duration"]] for c in curve])
        return json.dumps(rep, indent=2)

    if cmd == "oracle":
        rep = run_oracle_check(args.seeds, args.nx, args.ny, args.neighborhood,
                               transit=scenario.transit, spacing=args.spacing or None)
        if fmt == "csv":
            cols = ["seed", "t0", "oracle", "TVE", "A*TVE"]
            return to_csv(cols, [[c[k] for k in cols] for c in rep["cases"]])
        return json.dumps(rep, indent=2)

    if cmd == "emit-field":
        rows = emit_field(scenario, _floats(args.times), args.density)
        if fmt == "csv":
            return to_csv(["x", "y", "t", "u", "v"], [[r[k] for k in "xytuv"] for r in rows])
        return json.dumps(rows, indent=2)

    if cmd == "audit":
        fifo = fifo_audit(args.edges, args.seed, scenario.provider(), scenario.grid.region,
                          cfg=scenario.transit)
        cont = containment_audit(max(args.edges // 2, 1), scenario.variance, args.seed,
                                 scenario.provider(), scenario.grid.region, cfg=scenario.transit)
        rep = {"fifo": fifo, "containment": cont}
        if fmt == "csv":
            return to_csv(["audit", "checked", "flagged"],
                          [["fifo", fifo["checked"], len(fifo["violations"])],
                           ["containment", cont["checked"], len(cont["misses"])]])
        return json.dumps(rep, indent=2)

    raise AssertionError(cmd)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = _dispatch(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"tveroute: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
