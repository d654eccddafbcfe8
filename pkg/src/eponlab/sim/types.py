from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from eponlab.traffic import TrafficClass


class Fidelity(enum.Enum):
    PROTOCOL = "protocol"
    QUEUEING = "queueing"


@dataclass(frozen=True)
class SimConfig:
    """Run control for one simulation.

    ``warmup`` defaults to 10% of ``sim_duration``. ``rtt`` and
    ``report_bytes`` only affect the protocol fidelity and default to the
    idealised values (zero round trip, REPORT folded into the guard).
    """

    rng_seed: int = 1
    sim_duration: float = 10.0
    warmup: float | None = None
    fidelity: Fidelity = Fidelity.QUEUEING
    batch_count: int = 10
    rtt: float = 0.0
    report_bytes: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "fidelity", Fidelity(self.fidelity))
        if self.warmup is None:
            object.__setattr__(self, "warmup", 0.1 * self.sim_duration)
        if not self.sim_duration > 0:
            raise ValueError(f"sim_duration must be > 0, got {self.sim_duration}")
        if not 0 <= self.warmup < self.sim_duration:
            raise ValueError(
                f"warmup must lie in [0, sim_duration), got {self.warmup}"
            )
        if self.batch_count < 2:
            raise ValueError(f"batch_count must be >= 2, got {self.batch_count}")
        if self.rtt < 0 or self.report_bytes < 0:
            raise ValueError("rtt and report_bytes must be >= 0")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError(f"rng_seed must be a 64-bit unsigned integer, got {self.rng_seed}")

    @property
    def window(self) -> float:
        return self.sim_duration - self.warmup


@dataclass(frozen=True)
class Packet:
    traffic_class: TrafficClass
    size: int
    arrival_time: float
    onu_id: int


@dataclass(frozen=True)
class GateMessage:
    onu_id: int
    slot_start: float
    slot_length_bytes: int


@dataclass(frozen=True)
class ReportMessage:
    onu_id: int
    queue_occupancy: dict[TrafficClass, int]


@dataclass(frozen=True)
class SimReport:
    """Measured steady-state quantities.

    Delays are averaged over packets that arrive after the warm-up and leave
    before the end of the run; queue lengths are time averages per ONU.
    """

    fidelity: Fidelity
    seed: int
    class_delay: dict[TrafficClass, float]
    class_delay_ci: dict[TrafficClass, float]
    class_queue_bytes: dict[TrafficClass, float]
    delay: float
    delay_ci: float
    mean_in_system: float
    arrival_rate: float
    utilization: float
    generated: dict[TrafficClass, int]
    delivered: dict[TrafficClass, int]
    in_queue: dict[TrafficClass, int]
    delay_samples: int
    station_counts: tuple[float, ...] = ()
    mean_cycle: float = math.nan
    max_cycle: float = math.nan
    mean_guard_per_cycle: float = math.nan
    guards_per_cycle: int = 0
    cycles: int = 0
    gates: tuple[GateMessage, ...] = field(default=(), repr=False)
    reports: tuple[ReportMessage, ...] = field(default=(), repr=False)

    @property
    def total_generated(self) -> int:
        return sum(self.generated.values())

    @property
    def total_delivered(self) -> int:
        return sum(self.delivered.values())
