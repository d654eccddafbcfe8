"""EPON upstream performance lab: analytic MPCP+IPACT model and DES twin."""

from eponlab.core import (
    DimensioningReport,
    InfeasibleCycleError,
    SystemConfig,
    batch_size,
    compute_guaranteed_bandwidth,
    compute_max_cycle,
    dimension,
    solve_wmax_for_cycle,
)
from eponlab.traffic import (
    GpsAllocation,
    Normalization,
    TrafficClass,
    TrafficProfile,
    class_arrival_rates,
    gps_rates,
    service_shares,
)
from eponlab.analytic import (
    AnalyticReport,
    StationMetrics,
    StationParams,
    UnstableStationError,
    batch_metrics,
    batch_root,
    evaluate,
    joint_state_probability,
    little_delay,
    mm1_metrics,
    stability_report,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticReport",
    "DimensioningReport",
    "GpsAllocation",
    "InfeasibleCycleError",
    "Normalization",
    "StationMetrics",
    "StationParams",
    "SystemConfig",
    "TrafficClass",
    "TrafficProfile",
    "UnstableStationError",
    "batch_metrics",
    "batch_root",
    "batch_size",
    "class_arrival_rates",
    "compute_guaranteed_bandwidth",
    "compute_max_cycle",
    "dimension",
    "evaluate",
    "gps_rates",
    "joint_state_probability",
    "little_delay",
    "mm1_metrics",
    "service_shares",
    "solve_wmax_for_cycle",
    "stability_report",
]
