"""Static IPACT dimensioning: cycle length, guaranteed bandwidth, batch size.

Window sizes are kept in bytes; the factor 8 to bits is applied where a
window meets a line rate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


class InfeasibleCycleError(ValueError):
    """Target cycle leaves no transmission time after the guard intervals."""


@dataclass(frozen=True)
class SystemConfig:
    """EPON upstream parameters.

    Attributes:
        n_onus: number of ONUs sharing the upstream wavelength.
        line_rate: upstream line rate in bit/s.
        guard: guard interval between consecutive slots, seconds.
        frame_length: fixed Ethernet frame size in bytes.
        w_max: per-ONU maximum transmission window in bytes.
    """

    n_onus: int
    line_rate: float
    guard: float
    frame_length: int
    w_max: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "w_max", tuple(int(w) for w in self.w_max))
        if self.n_onus < 1:
            raise ValueError(f"n_onus must be >= 1, got {self.n_onus}")
        if not self.line_rate > 0:
            raise ValueError(f"line_rate must be > 0, got {self.line_rate}")
        if self.guard < 0:
            raise ValueError(f"guard must be >= 0, got {self.guard}")
        if self.frame_length <= 0:
            raise ValueError(f"frame_length must be > 0, got {self.frame_length}")
        if len(self.w_max) != self.n_onus:
            raise ValueError(
                f"expected {self.n_onus} w_max entries, got {len(self.w_max)}"
            )
        for i, w in enumerate(self.w_max):
            if w < self.frame_length:
                raise ValueError(
                    f"w_max[{i}]={w} B cannot hold one {self.frame_length} B frame"
                )

    @classmethod
    def homogeneous(
        cls, n_onus: int, line_rate: float, guard: float, frame_length: int, w_max: int
    ) -> "SystemConfig":
        return cls(n_onus, line_rate, guard, frame_length, (w_max,) * n_onus)

    def frame_time(self) -> float:
        """Transmission time of one frame, seconds."""
        return 8.0 * self.frame_length / self.line_rate


@dataclass(frozen=True)
class DimensioningReport:
    t_max: float
    lambda_min: tuple[float, ...]
    batch_size: tuple[int, ...]


def compute_max_cycle(config: SystemConfig) -> float:
    """Maximum polling cycle: every ONU uses its full window plus one guard."""
    return math.fsum(config.guard + 8.0 * w / config.line_rate for w in config.w_max)


def compute_guaranteed_bandwidth(config: SystemConfig, t_max: float) -> tuple[float, ...]:
    """Minimum guaranteed bandwidth of each ONU in bit/s."""
    if not t_max > 0:
        raise ValueError(f"t_max must be > 0, got {t_max}")
    return tuple(8.0 * w / t_max for w in config.w_max)


def solve_wmax_for_cycle(
    n_onus: int, line_rate: float, guard: float, target_t_max: float
) -> int:
    """Largest homogeneous window (whole bytes) whose cycle does not exceed the target."""
    if target_t_max <= n_onus * guard:
        raise InfeasibleCycleError(
            f"target cycle {target_t_max} s <= {n_onus} guards of {guard} s"
        )
    raw = (target_t_max / n_onus - guard) * line_rate / 8.0
    w = math.floor(raw)
    # absorb representation error such as 14999.999999999998 for an exact 15000
    if math.isclose(raw, w + 1, rel_tol=1e-12, abs_tol=0.0):
        w += 1
    while w > 0 and n_onus * (guard + 8.0 * w / line_rate) > target_t_max * (1 + 1e-15):
        w -= 1
    if w <= 0:
        raise InfeasibleCycleError(f"target cycle {target_t_max} s leaves no whole byte")
    return w


def batch_size(config: SystemConfig, onu_index: int) -> int:
    """Whole frames that fit in one maximum window of ONU ``onu_index``."""
    if not 0 <= onu_index < config.n_onus:
        raise IndexError(f"onu_index {onu_index} out of range for {config.n_onus} ONUs")
    return config.w_max[onu_index] // config.frame_length


def dimension(config: SystemConfig) -> DimensioningReport:
    t_max = compute_max_cycle(config)
    return DimensioningReport(
        t_max=t_max,
        lambda_min=compute_guaranteed_bandwidth(config, t_max),
        batch_size=tuple(batch_size(config, i) for i in range(config.n_onus)),
    )


def config_from_cycle(
    n_onus: int, line_rate: float, guard: float, frame_length: int, target_t_max: float
) -> SystemConfig:
    """Homogeneous-SLA system dimensioned for a target maximum cycle."""
    w = solve_wmax_for_cycle(n_onus, line_rate, guard, target_t_max)
    return SystemConfig.homogeneous(n_onus, line_rate, guard, frame_length, w)


def default_config() -> SystemConfig:
    """16 ONUs, 1 Gbit/s, 5 us guard, 2 ms cycle, 1500 B frames."""
    return config_from_cycle(16, 1e9, 5e-6, 1500, 2e-3)

