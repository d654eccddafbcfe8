import math

import numpy as np
import pytest

from eponlab.analytic import StationParams, evaluate, stations_for
from eponlab.sim import SimConfig, UndefinedCheckError, little_check, run_queueing_sim, simulate
from eponlab.sim import kernel
from eponlab.traffic import CLASSES, default_profile

EF, AF, BE = CLASSES


def network(config, load):
    st, s2 = stations_for(config, default_profile(load))
    return [st[c] for c in CLASSES] + [s2]


def test_single_mm1_sojourn():
    # stage two so fast it adds nanoseconds
    stations = [StationParams(0.5, 1.0), StationParams(0.0, 1.0), StationParams(0.0, 1.0),
                StationParams(0.5, 1e9, 1)]
    rep = run_queueing_sim(stations, SimConfig(rng_seed=4, sim_duration=2e5, batch_count=20))
    assert abs(rep.delay - 2.0) <= rep.delay_ci
    assert rep.delivered[AF] == rep.delivered[BE] == 0


def test_tandem_k1_sojourn():
    # departures of a stable M/M/1 are Poisson, so the two sojourns add
    stations = [StationParams(0.5, 1.0), StationParams(0.0, 1.0), StationParams(0.0, 1.0),
                StationParams(0.5, 2.0, 1)]
    rep = run_queueing_sim(stations, SimConfig(rng_seed=9, sim_duration=2e5, batch_count=20))
    expected = 1 / (1.0 - 0.5) + 1 / (2.0 - 0.5)
    assert abs(rep.delay - expected) <= 2 * rep.delay_ci


def test_station_counts_match_closed_forms(config):
    stations = network(config, 0.02)
    rep = run_queueing_sim(stations, SimConfig(rng_seed=21, sim_duration=300.0))
    ana = evaluate(config, default_profile(0.02))
    for measured, m in zip(rep.station_counts, ana.all_metrics):
        assert measured == pytest.approx(m.expected_count, rel=0.05)


def test_same_seed_same_report(config):
    sim = SimConfig(rng_seed=77, sim_duration=5.0)
    assert run_queueing_sim(network(config, 0.02), sim) == run_queueing_sim(network(config, 0.02), sim)


def test_different_seed_differs(config):
    a = run_queueing_sim(network(config, 0.02), SimConfig(rng_seed=1, sim_duration=5.0))
    b = run_queueing_sim(network(config, 0.02), SimConfig(rng_seed=2, sim_duration=5.0))
    assert a.delay != b.delay


def test_conservation(config):
    rep = run_queueing_sim(network(config, 0.03), SimConfig(rng_seed=3, sim_duration=5.0))
    for c in CLASSES:
        assert rep.generated[c] == rep.delivered[c] + rep.in_queue[c]
    assert rep.total_delivered <= rep.total_generated


def test_zero_load(config):
    rep = simulate(config, default_profile(0.0), SimConfig(sim_duration=1.0))
    assert rep.total_generated == rep.total_delivered == 0
    assert rep.utilization == 0.0
    assert math.isnan(rep.delay)
    with pytest.raises(UndefinedCheckError):
        little_check(rep, 1.0)


def test_little_check_stable_run(config):
    rep = run_queueing_sim(network(config, 0.025), SimConfig(rng_seed=8, sim_duration=60.0))
    assert little_check(rep, rep.arrival_rate) < 0.02


def test_little_discrepancy_shrinks_with_duration(config):
    stations = network(config, 0.02)

    def mean_gap(duration):
        gaps = []
        for seed in range(10):
            rep = run_queueing_sim(stations, SimConfig(rng_seed=seed, sim_duration=duration))
            gaps.append(little_check(rep, rep.arrival_rate))
        return np.mean(gaps)

    assert mean_gap(40.0) <= mean_gap(20.0)


def test_rejects_bad_station_list():
    with pytest.raises(ValueError):
        run_queueing_sim([StationParams(0.1, 1.0)] * 3, SimConfig())
    with pytest.raises(ValueError):
        run_queueing_sim([StationParams(0.1, 1.0, 2)] * 4, SimConfig())


@pytest.mark.parametrize(
    "kwargs", [dict(sim_duration=0.0), dict(sim_duration=1.0, warmup=1.0), dict(batch_count=1),
               dict(rng_seed=-1), dict(rtt=-1.0)]
)
def test_sim_config_invariants(kwargs):
    with pytest.raises(ValueError):
        SimConfig(**kwargs)


def test_warmup_default_is_ten_percent():
    assert SimConfig(sim_duration=20.0).warmup == 2.0


@pytest.mark.skipif(not kernel.COMPILED, reason="compiled kernel not built")
@pytest.mark.parametrize("load", [0.0, 0.005, 0.03])
def test_compiled_and_python_loops_identical(config, load):
    sim = SimConfig(rng_seed=13, sim_duration=3.0)
    stations = network(config, load)
    fast = run_queueing_sim(stations, sim, backend=kernel.run_network)
    slow = run_queueing_sim(stations, sim, backend=kernel.run_network_py)
    assert fast.generated == slow.generated and fast.delivered == slow.delivered
    assert fast.station_counts == slow.station_counts
    assert fast.delay == slow.delay or (math.isnan(fast.delay) and math.isnan(slow.delay))
    assert fast.class_queue_bytes == slow.class_queue_bytes
