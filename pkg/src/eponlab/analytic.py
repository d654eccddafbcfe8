"""Closed-form model of one ONU: three M/M/1 class queues feeding an M/M^Y/1 stage.

Every station has a geometric marginal distribution, so the joint law is a
product of geometric terms and the mean access delay follows from Little's
law.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from eponlab.core import SystemConfig, batch_size
from eponlab.traffic import (
    CLASSES,
    TrafficClass,
    TrafficProfile,
    class_arrival_rates,
    gps_rates,
    guaranteed_rate_pps,
    mix_shares,
    service_shares,
)

ROOT_TOL = 1e-12


class UnstableStationError(ValueError):
    """Arrival rate reaches the station's capacity; no stationary regime."""


@dataclass(frozen=True)
class StationParams:
    arrival_rate: float
    service_rate: float
    batch_size: int = 1

    def __post_init__(self) -> None:
        if self.arrival_rate < 0:
            raise ValueError(f"arrival_rate must be >= 0, got {self.arrival_rate}")
        if not self.service_rate > 0:
            raise ValueError(f"service_rate must be > 0, got {self.service_rate}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")

    @property
    def utilization(self) -> float:
        return self.arrival_rate / (self.batch_size * self.service_rate)

    @property
    def stable(self) -> bool:
        return self.arrival_rate < self.batch_size * self.service_rate


@dataclass(frozen=True)
class StationMetrics:
    utilization: float
    stable: bool
    expected_count: float
    marginal_ratio: float


def mm1_metrics(params: StationParams) -> StationMetrics:
    if params.batch_size != 1:
        raise ValueError("mm1_metrics expects batch_size == 1; use batch_metrics")
    rho = params.arrival_rate / params.service_rate
    if rho >= 1.0:
        return StationMetrics(rho, False, math.inf, math.nan)
    return StationMetrics(rho, True, rho / (1.0 - rho), rho)


def _deflated(r: float, lam: float, mu: float, k: int) -> tuple[float, float]:
    """Value and slope of mu*(r + r^2 + ... + r^K) - lam via Horner's scheme."""
    s, ds = 0.0, 0.0
    for _ in range(k):
        ds = ds * r + s
        s = s * r + 1.0
    # s = 1 + r + ... + r^(K-1); value uses r*s
    return mu * r * s - lam, mu * (s + r * ds)


def batch_root(params: StationParams, tol: float = ROOT_TOL) -> float:
    """Root in (0, 1) of mu*r^(K+1) - (lam+mu)*r + lam.

    The polynomial always vanishes at r = 1; dividing out (r - 1) leaves
    g(r) = mu*(r + ... + r^K) - lam, which is strictly increasing on [0, 1]
    with g(0) = -lam and g(1) = K*mu - lam. Bisection brings the bracket
    below sqrt(tol), then safeguarded Newton steps run until a step is
    smaller than ``tol``.
    """
    lam, mu, k = params.arrival_rate, params.service_rate, params.batch_size
    if not lam < k * mu:
        raise UnstableStationError(f"lambda={lam} >= K*mu={k * mu}: no root in (0, 1)")
    if lam == 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    coarse = math.sqrt(tol)
    while hi - lo > coarse:
        mid = 0.5 * (lo + hi)
        if _deflated(mid, lam, mu, k)[0] < 0.0:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    for _ in range(60):
        g, dg = _deflated(r, lam, mu, k)
        if g < 0.0:
            lo = r
        else:
            hi = r
        step = g / dg
        nxt = r - step
        if not lo <= nxt <= hi:
            nxt = 0.5 * (lo + hi)
            step = r - nxt
        r = nxt
        if abs(step) <= tol:
            break
    return r


def batch_metrics(params: StationParams, tol: float = ROOT_TOL) -> StationMetrics:
    rho = params.utilization
    if not params.stable:
        return StationMetrics(rho, False, math.inf, math.nan)
    r0 = batch_root(params, tol)
    return StationMetrics(rho, True, r0 / (1.0 - r0), r0)


def station_metrics(params: StationParams, tol: float = ROOT_TOL) -> StationMetrics:
    if params.batch_size == 1:
        return mm1_metrics(params)
    return batch_metrics(params, tol)


def stability_report(stations: Sequence[StationParams]) -> list[bool]:
    """Per-station stability, rho = lambda / (K * mu) < 1."""
    return [s.stable for s in stations]


def little_delay(expected_count: float, throughput: float) -> float:
    """Mean sojourn time E[N] / gamma."""
    if not throughput > 0:
        raise ValueError(f"throughput must be > 0, got {throughput}")
    return expected_count / throughput


@dataclass(frozen=True)
class AnalyticReport:
    """Steady-state metrics of one ONU.

    ``expected_count``, ``delay`` and entries of ``class_delays`` are
    ``inf`` when a station they depend on is unstable and ``nan`` when the
    load is zero (Little's law needs a positive throughput).
    """

    stations: dict[TrafficClass, StationParams]
    stage_two_params: StationParams
    classes: dict[TrafficClass, StationMetrics]
    stage_two: StationMetrics
    throughput: float
    expected_count: float
    delay: float
    class_delays: dict[TrafficClass, float]
    frame_length: int
    metadata: dict[str, str] = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return self.stage_two.stable and all(m.stable for m in self.classes.values())

    @property
    def all_params(self) -> list[StationParams]:
        return [self.stations[c] for c in CLASSES] + [self.stage_two_params]

    @property
    def all_metrics(self) -> list[StationMetrics]:
        return [self.classes[c] for c in CLASSES] + [self.stage_two]

    @property
    def stage_two_delay(self) -> float:
        lam = self.throughput
        if not self.stage_two.stable:
            return math.inf
        if lam == 0:
            return math.nan
        r0 = self.stage_two.marginal_ratio
        return r0 / (lam * (1.0 - r0))

    def expanded_delay(self) -> float:
        """Two-term form r0/(lam(1-r0)) + (1/lam) sum rho_c/(1-rho_c)."""
        lam = self.throughput
        first = math.fsum(
            m.utilization / (1.0 - m.utilization)
            for c, m in self.classes.items()
            if self.stations[c].arrival_rate > 0
        )
        return self.stage_two_delay + first / lam


REPORT_METADATA = {
    "scope": "single ONU; lambda is the per-ONU arrival rate under the chosen load normalization",
    "class_delay": "reconstruction: E[N_c]/lambda_c plus the shared stage-two delay",
    "gps_set": "static: every class with positive mix fraction",
    "batch_size": "whole frames per maximum window, floor(W_MAX / L)",
}


def stations_for(
    config: SystemConfig, profile: TrafficProfile, onu_index: int = 0
) -> tuple[dict[TrafficClass, StationParams], StationParams]:
    """Station parameters for one ONU under the static GPS split."""
    lam_c = class_arrival_rates(profile, config, onu_index)
    base = guaranteed_rate_pps(config, onu_index)
    shares = service_shares(profile) if profile.load > 0 else mix_shares(profile)
    active = [c for c in CLASSES if profile.mix[c] > 0]
    alloc = gps_rates(shares, active, base)
    stations = {}
    for c in CLASSES:
        # a class with no traffic keeps a nominal rate so its station stays valid and empty
        mu = alloc.rates[c] if c in alloc.nonempty_set else base
        stations[c] = StationParams(lam_c[c], mu, 1)
    lam = math.fsum(lam_c.values())
    stage_two = StationParams(lam, base, batch_size(config, onu_index))
    return stations, stage_two


def evaluate(
    config: SystemConfig,
    profile: TrafficProfile,
    onu_index: int = 0,
    root_tol: float = ROOT_TOL,
) -> AnalyticReport:
    stations, stage_two_params = stations_for(config, profile, onu_index)
    classes = {c: mm1_metrics(stations[c]) for c in CLASSES}
    stage_two = batch_metrics(stage_two_params, root_tol)
    lam = stage_two_params.arrival_rate
    counts = [classes[c].expected_count for c in CLASSES] + [stage_two.expected_count]
    total = math.fsum(counts) if all(math.isfinite(n) for n in counts) else math.inf

    if lam > 0:
        delay = little_delay(total, lam) if math.isfinite(total) else math.inf
    else:
        delay = math.nan

    stage_two_delay = (
        math.inf if not stage_two.stable
        else math.nan if lam == 0
        else stage_two.marginal_ratio / (lam * (1.0 - stage_two.marginal_ratio))
    )
    class_delays = {}
    for c in CLASSES:
        lam_c = stations[c].arrival_rate
        if not classes[c].stable or not stage_two.stable:
            class_delays[c] = math.inf
        elif lam_c == 0:
            class_delays[c] = math.nan
        else:
            class_delays[c] = classes[c].expected_count / lam_c + stage_two_delay

    return AnalyticReport(
        stations=stations,
        stage_two_params=stage_two_params,
        classes=classes,
        stage_two=stage_two,
        throughput=lam,
        expected_count=total,
        delay=delay,
        class_delays=class_delays,
        frame_length=config.frame_length,
        metadata=dict(REPORT_METADATA, normalization=profile.normalization.value),
    )


def joint_state_probability(
    counts: Sequence[int], report: AnalyticReport | Sequence[float]
) -> float:
    """Product-form probability of (n_EF, n_AF, n_BE, n_stage2).

    ``report`` may also be the four geometric ratios directly.
    """
    if isinstance(report, AnalyticReport):
        if not report.stable:
            raise UnstableStationError("no stationary distribution: a station is unstable")
        ratios = [m.marginal_ratio for m in report.all_metrics]
    else:
        ratios = [float(q) for q in report]
        if any(not 0.0 <= q < 1.0 for q in ratios):
            raise UnstableStationError(f"geometric ratios must lie in [0, 1): {ratios}")
    if len(counts) != len(ratios):
        raise ValueError(f"expected {len(ratios)} counts, got {len(counts)}")
    if any(n < 0 for n in counts):
        raise ValueError(f"counts must be >= 0: {counts}")
    p = 1.0
    for n, q in zip(counts, ratios):
        p *= (1.0 - q) * q**n
    return p


def class_map(values: Mapping[TrafficClass, float]) -> list[float]:
    return [values[c] for c in CLASSES]
