"""Discrete-event simulation of the EPON upstream at two fidelities."""
from eponlab.sim.types import (
    Fidelity,
    GateMessage,
    Packet,
    ReportMessage,
    SimConfig,
    SimReport,
)
from eponlab.sim.stats import UndefinedCheckError, batch_means_ci, little_check
from eponlab.sim.network import run_queueing_sim
from eponlab.sim.protocol import apportion, run_protocol_sim, simulate

__all__ = [
    "Fidelity",
    "GateMessage",
    "Packet",
    "ReportMessage",
    "SimConfig",
    "SimReport",
    "UndefinedCheckError",
    "apportion",
    "batch_means_ci",
    "little_check",
    "run_protocol_sim",
    "run_queueing_sim",
    "simulate",
]
