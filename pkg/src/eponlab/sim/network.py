"""Queueing-network fidelity: the analytic model's stations simulated directly."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from eponlab.analytic import StationParams
from eponlab.sim import kernel
from eponlab.sim.stats import batch_means_ci
from eponlab.sim.types import Fidelity, SimConfig, SimReport
from eponlab.traffic import CLASSES


def run_queueing_sim(
    stations: Sequence[StationParams],
    sim: SimConfig,
    frame_length: int = 1500,
    backend=None,
) -> SimReport:
    """Simulate the EF/AF/BE M/M/1 stations feeding the bulk-service station.

    ``stations`` is ordered EF, AF, BE, stage two. ``backend`` overrides the
    event-loop implementation (defaults to the compiled kernel when built).
    """
    if len(stations) != 4:
        raise ValueError(f"expected 4 stations (EF, AF, BE, stage two), got {len(stations)}")
    if any(s.batch_size != 1 for s in stations[:3]):
        raise ValueError("first-stage stations must have batch_size 1")
    run = backend or kernel.run_network
    rng = np.random.default_rng(sim.rng_seed)
    raw = run(
        [s.arrival_rate for s in stations[:3]],
        [s.service_rate for s in stations[:3]],
        stations[3].service_rate,
        stations[3].batch_size,
        sim.warmup,
        sim.sim_duration,
        sim.batch_count,
        rng,
    )
    return _report(raw, sim, frame_length)


def _report(raw: dict, sim: SimConfig, frame_length: int) -> SimReport:
    window = sim.window
    sums, cnts = raw["delay_sum"], raw["delay_cnt"]
    class_delay, class_ci = {}, {}
    for i, c in enumerate(CLASSES):
        class_delay[c], class_ci[c] = batch_means_ci(sums[i], cnts[i])
    delay, delay_ci = batch_means_ci(sums.sum(axis=0), cnts.sum(axis=0))
    station_counts = tuple(a / window for a in raw["area_station"])
    return SimReport(
        fidelity=Fidelity.QUEUEING,
        seed=sim.rng_seed,
        class_delay=class_delay,
        class_delay_ci=class_ci,
        class_queue_bytes={
            c: raw["area_class"][i] / window * frame_length for i, c in enumerate(CLASSES)
        },
        delay=delay,
        delay_ci=delay_ci,
        mean_in_system=sum(raw["area_class"]) / window,
        arrival_rate=raw["arrivals_window"] / window,
        utilization=raw["busy2"] / window,
        generated={c: int(raw["generated"][i]) for i, c in enumerate(CLASSES)},
        delivered={c: int(raw["delivered"][i]) for i, c in enumerate(CLASSES)},
        in_queue={c: int(raw["in_queue"][i]) for i, c in enumerate(CLASSES)},
        delay_samples=int(cnts.sum()),
        station_counts=station_counts,
    )
