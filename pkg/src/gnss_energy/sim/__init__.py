"""Constellation simulation, tracking policies and scenario runs."""

from .constellation import ConstellationConfig, propagate_constellation, visible_satellites
from .report import CompareSummary, compare_policies, comparison_table_csv, epochs_csv, summary_dict, trajectory_csv
from .runner import (
    EpochRecord,
    PolicyKind,
    RunFailedError,
    RunReport,
    TrackingPolicy,
    generate_measurements,
    run_scenario,
)
from .scenario import OutageModel, Scenario, Waypoint, default_scenario, load_scenario, save_scenario

__all__ = [
    "CompareSummary", "ConstellationConfig", "EpochRecord", "OutageModel", "PolicyKind",
    "RunFailedError", "RunReport", "Scenario", "TrackingPolicy", "Waypoint",
    "compare_policies", "comparison_table_csv", "default_scenario", "epochs_csv",
    "generate_measurements", "load_scenario", "propagate_constellation", "run_scenario",
    "save_scenario", "summary_dict", "trajectory_csv", "visible_satellites",
]
