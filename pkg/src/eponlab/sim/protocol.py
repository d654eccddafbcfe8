"""MPCP + IPACT protocol-level simulation.

The OLT polls ONUs in fixed cyclic order. Each GATE grants the bytes the ONU
reported in its previous slot, capped at its maximum window; consecutive
slots are separated by the guard interval. Inside its slot an ONU splits
the frame budget among its nonempty class queues in proportion to the GPS
shares, then reports what is left.

With zero RTT the channel timeline is fully determined by the grants, so
the run walks slot by slot and generates each ONU's Poisson arrivals lazily
up to its slot start. Every (ONU, class) pair draws from its own RNG stream,
which keeps results independent of processing order.
"""
from __future__ import annotations

import math
from collections import deque
from typing import Mapping

import numpy as np

from eponlab.analytic import stations_for
from eponlab.core import SystemConfig
from eponlab.sim.network import run_queueing_sim
from eponlab.sim.stats import batch_means_ci
from eponlab.sim.types import Fidelity, GateMessage, ReportMessage, SimConfig, SimReport
from eponlab.traffic import CLASSES, TrafficClass, TrafficProfile, class_arrival_rates, mix_shares

_BLOCK = 4096


class _Exponentials:
    __slots__ = ("rng", "buf", "pos")

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.buf = rng.standard_exponential(_BLOCK).tolist()
        self.pos = 0

    def draw(self) -> float:
        if self.pos == _BLOCK:
            self.buf = self.rng.standard_exponential(_BLOCK).tolist()
            self.pos = 0
        e = self.buf[self.pos]
        self.pos += 1
        return e


def apportion(
    budget: int, backlog: Mapping[TrafficClass, int], shares: Mapping[TrafficClass, float]
) -> dict[TrafficClass, int]:
    """Whole-frame GPS split of a slot's frame budget.

    Classes whose proportional quota covers their backlog are served in
    full and the rest of the budget is re-split among the others; the final
    split uses largest remainders with ties going to the higher priority.
    """
    counts = {c: 0 for c in CLASSES}
    active = [c for c in CLASSES if backlog.get(c, 0) > 0]
    remaining = min(budget, sum(backlog.get(c, 0) for c in active))
    while remaining > 0 and active:
        denom = math.fsum(shares[c] for c in active)
        ideal = {c: remaining * shares[c] / denom for c in active}
        full = [c for c in active if ideal[c] >= backlog[c] - counts[c]]
        if full:
            for c in full:
                give = backlog[c] - counts[c]
                counts[c] += give
                remaining -= give
                active.remove(c)
            continue
        floors = {c: int(ideal[c]) for c in active}
        for c in active:
            counts[c] += floors[c]
        left = remaining - sum(floors.values())
        order = sorted(active, key=lambda c: (-(ideal[c] - floors[c]), c))
        for c in order[:left]:
            counts[c] += 1
        break
    return counts


def _overlap(a: float, b: float, lo: float, hi: float) -> float:
    return max(0.0, min(b, hi) - max(a, lo))


def run_protocol_sim(
    config: SystemConfig,
    profile: TrafficProfile,
    sim: SimConfig,
    trace: bool = False,
) -> SimReport:
    """Simulate all ONUs under IPACT with limited-service grants.

    Every ONU receives the per-ONU arrival rates of ``profile``. With
    ``trace`` the report carries every GATE and REPORT exchanged.
    """
    n = config.n_onus
    frame = config.frame_length
    ft = 8.0 * frame / config.line_rate
    report_time = 8.0 * sim.report_bytes / config.line_rate
    warmup, end = sim.warmup, sim.sim_duration
    window = sim.window
    n_batches = sim.batch_count
    max_frames = [w // frame for w in config.w_max]
    shares = mix_shares(profile)

    seeds = np.random.SeedSequence(sim.rng_seed).spawn(n * len(CLASSES))
    streams = [[_Exponentials(np.random.default_rng(seeds[i * 3 + k])) for k in range(3)]
               for i in range(n)]
    rates = [[class_arrival_rates(profile, config, i)[c] for c in CLASSES] for i in range(n)]
    queues = [[deque() for _ in CLASSES] for _ in range(n)]
    next_arr = [[streams[i][k].draw() / rates[i][k] if rates[i][k] > 0 else math.inf
                 for k in range(3)] for i in range(n)]

    generated = [0, 0, 0]
    delivered = [0, 0, 0]
    arrivals_window = 0
    delay_sum = np.zeros((3, n_batches))
    delay_cnt = np.zeros((3, n_batches), dtype=np.int64)
    area = [0.0, 0.0, 0.0]
    busy = 0.0

    def advance(i: int, t: float) -> None:
        nonlocal arrivals_window
        for k in range(3):
            nxt = next_arr[i][k]
            if nxt > t:
                continue
            q = queues[i][k]
            lam = rates[i][k]
            s = streams[i][k]
            while nxt <= t:
                q.append(nxt)
                generated[k] += 1
                if nxt >= warmup:
                    arrivals_window += 1
                nxt = nxt + s.draw() / lam
            next_arr[i][k] = nxt

    def depart(k: int, a: float, d: float) -> None:
        delivered[k] += 1
        area[k] += _overlap(a, d, warmup, end)
        if a >= warmup and d <= end:
            b = min(int((a - warmup) / window * n_batches), n_batches - 1)
            delay_sum[k, b] += d - a
            delay_cnt[k, b] += 1

    reported = [0] * n
    report_arrival = [-math.inf] * n
    gates: list[GateMessage] = []
    reports: list[ReportMessage] = []
    cycle_lengths: list[float] = []
    cycle_guard: list[float] = []
    t = 0.0
    cycle_start = None
    cycle_tx = 0.0
    running = True
    while running:
        for i in range(n):
            start = t
            if sim.rtt > 0:
                start = max(start, report_arrival[i] + sim.rtt)
            if start >= end:
                running = False
                break
            if i == 0:
                if cycle_start is not None and cycle_start >= warmup:
                    cycle_lengths.append(start - cycle_start)
                    cycle_guard.append(start - cycle_start - cycle_tx)
                cycle_start = start
                cycle_tx = 0.0
            advance(i, start)
            grant = min(-(-reported[i] // frame), max_frames[i])
            if trace:
                gates.append(GateMessage(i, start, grant * frame))
            backlog = {c: len(queues[i][c]) for c in CLASSES}
            counts = apportion(grant, backlog, shares)
            j = 0
            for c in CLASSES:
                q = queues[i][c]
                for _ in range(counts[c]):
                    j += 1
                    depart(c, q.popleft(), start + j * ft)
            tx = j * ft
            busy += _overlap(start, start + tx, warmup, end)
            slot_end = start + tx + report_time
            cycle_tx += tx + report_time
            left = {c: (backlog[c] - counts[c]) * frame for c in CLASSES}
            reported[i] = sum(left.values())
            if trace:
                reports.append(ReportMessage(i, left))
            report_arrival[i] = slot_end
            t = slot_end + config.guard

    for i in range(n):
        advance(i, end)
    in_queue = [0, 0, 0]
    for i in range(n):
        for k in range(3):
            for a in queues[i][k]:
                area[k] += _overlap(a, end, warmup, end)
            in_queue[k] += len(queues[i][k])

    class_delay, class_ci = {}, {}
    for k, c in enumerate(CLASSES):
        class_delay[c], class_ci[c] = batch_means_ci(delay_sum[k], delay_cnt[k])
    delay, delay_ci = batch_means_ci(delay_sum.sum(axis=0), delay_cnt.sum(axis=0))
    return SimReport(
        fidelity=Fidelity.PROTOCOL,
        seed=sim.rng_seed,
        class_delay=class_delay,
        class_delay_ci=class_ci,
        class_queue_bytes={c: area[k] / (window * n) * frame for k, c in enumerate(CLASSES)},
        delay=delay,
        delay_ci=delay_ci,
        mean_in_system=sum(area) / (window * n),
        arrival_rate=arrivals_window / (window * n),
        utilization=busy / window,
        generated={c: generated[k] for k, c in enumerate(CLASSES)},
        delivered={c: delivered[k] for k, c in enumerate(CLASSES)},
        in_queue={c: in_queue[k] for k, c in enumerate(CLASSES)},
        delay_samples=int(delay_cnt.sum()),
        mean_cycle=float(np.mean(cycle_lengths)) if cycle_lengths else math.nan,
        max_cycle=max(cycle_lengths) if cycle_lengths else math.nan,
        mean_guard_per_cycle=float(np.mean(cycle_guard)) if cycle_guard else math.nan,
        guards_per_cycle=n,
        cycles=len(cycle_lengths),
        gates=tuple(gates),
        reports=tuple(reports),
    )


def simulate(
    config: SystemConfig, profile: TrafficProfile, sim: SimConfig, onu_index: int = 0
) -> SimReport:
    """Run the fidelity selected in ``sim``."""
    if sim.fidelity is Fidelity.PROTOCOL:
        return run_protocol_sim(config, profile, sim)
    stations, stage_two = stations_for(config, profile, onu_index)
    return run_queueing_sim([stations[c] for c in CLASSES] + [stage_two], sim, config.frame_length)

