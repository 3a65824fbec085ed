"""Beam-aligned V2V data sharing at an intersection: scenario generation,
link budgets, conflict-graph scheduling, and a slot-level simulator."""

from .coverage import CoverageTracker, coverage_report, normalized_area, region_union
from .geometry import (
    Frame,
    Region,
    Scenario,
    ScenarioConfig,
    ScenarioError,
    Vehicle,
    build_scenario,
    count_blockers,
    scenario_from_text,
    scenario_to_text,
    sensor_region,
)
from .mwis import GWMIN, MAX_WEIGHT_FIRST, IndependentSet, exact_mwis, greedy_mwis
from .netgraph import VehNetGraph, build_network_graph, is_connected
from .propagation import (
    LinkBudget,
    RadioConfig,
    ScenarioRadio,
    antenna_gain_dbi,
    boresight_gain_dbi,
    link_budget,
    path_loss_db,
    received_power_dbm,
)
from .schedgraph import (
    BASIC_ONLY,
    CONVENTIONAL_D,
    MAX_DISTANCE,
    MAX_TRANSMISSION,
    MMWAVE_D_PRIME,
    ConflictPolicy,
    DatasetState,
    SchedulingGraph,
    Transmission,
    build_scheduling_graph,
    conflicts,
    enumerate_transmissions,
    sinr_pairwise,
)
from .simulator import (
    Schedule,
    SimResult,
    execute_schedule,
    plan_schedule,
    run_interval,
    tau_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "BASIC_ONLY",
    "CONVENTIONAL_D",
    "ConflictPolicy",
    "CoverageTracker",
    "DatasetState",
    "Frame",
    "GWMIN",
    "IndependentSet",
    "LinkBudget",
    "MAX_DISTANCE",
    "MAX_TRANSMISSION",
    "MAX_WEIGHT_FIRST",
    "MMWAVE_D_PRIME",
    "RadioConfig",
    "Region",
    "Scenario",
    "ScenarioConfig",
    "ScenarioError",
    "ScenarioRadio",
    "Schedule",
    "SchedulingGraph",
    "SimResult",
    "Transmission",
    "VehNetGraph",
    "Vehicle",
    "antenna_gain_dbi",
    "boresight_gain_dbi",
    "build_network_graph",
    "build_scenario",
    "build_scheduling_graph",
    "conflicts",
    "count_blockers",
    "coverage_report",
    "enumerate_transmissions",
    "exact_mwis",
    "execute_schedule",
    "greedy_mwis",
    "is_connected",
    "link_budget",
    "normalized_area",
    "path_loss_db",
    "plan_schedule",
    "received_power_dbm",
    "region_union",
    "run_interval",
    "scenario_from_text",
    "scenario_to_text",
    "sensor_region",
    "sinr_pairwise",
    "tau_bounds",
]
