"""Scenario loading, experiment runners and the command-line interface."""
from .scenario import Scenario, load_scenario, reference_scenario
from .runs import (
    emit_field,
    run_bench,
    run_departure_sweep,
    run_oracle_check,
    run_plan,
    run_variance_sweep,
)

__all__ = [
    "Scenario",
    "load_scenario",
    "reference_scenario",
    "emit_field",
    "run_bench",
    "run_departure_sweep",
    "run_oracle_check",
    "run_plan",
    "run_variance_sweep",
]
