import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eponlab.analytic import (
    StationParams,
    UnstableStationError,
    batch_metrics,
    batch_root,
    evaluate,
    joint_state_probability,
    little_delay,
    mm1_metrics,
    stability_report,
    stations_for,
)
from eponlab.core import default_config
from eponlab.traffic import CLASSES, TrafficProfile, class_arrival_rates, default_profile

from oracles import grid_scan_root

EF, AF, BE = CLASSES

# frozen from oracles.grid_scan_root (step 1e-6 sign scan + bisection)
R0_K10_25000_5000 = 0.8688216988417776
R0_K3_LAM2 = 0.8105357137661366


def test_mm1_half_load():
    m = mm1_metrics(StationParams(0.5, 1.0))
    assert (m.utilization, m.expected_count, m.stable) == (0.5, 1.0, True)


def test_mm1_empty():
    m = mm1_metrics(StationParams(0.0, 3.0))
    assert m.expected_count == 0.0 and m.stable


def test_mm1_high_load():
    assert mm1_metrics(StationParams(0.8, 1.0)).expected_count == pytest.approx(4.0, rel=1e-12)


def test_mm1_unstable_reported_not_raised():
    m = mm1_metrics(StationParams(1.0, 1.0))
    assert not m.stable and math.isinf(m.expected_count)


def test_batch_root_k1_is_rho():
    assert batch_root(StationParams(0.3, 1.0, 1)) == pytest.approx(0.3, abs=1e-15)


def test_batch_root_light_load_limit():
    assert batch_root(StationParams(1e-9, 1.0, 10)) < 1e-8
    assert batch_root(StationParams(0.0, 1.0, 10)) == 0.0


def test_batch_root_matches_grid_scan_oracle():
    assert grid_scan_root(25000, 5000, 10) == pytest.approx(R0_K10_25000_5000, abs=1e-12)
    assert batch_root(StationParams(25000, 5000, 10)) == pytest.approx(R0_K10_25000_5000, abs=1e-12)


@pytest.mark.parametrize("lam, mu, k", [(0.5, 1.0, 3), (9.0, 1.0, 10), (1.9, 1.0, 2), (100.0, 30.0, 5)])
def test_batch_root_against_oracle(lam, mu, k):
    assert batch_root(StationParams(lam, mu, k)) == pytest.approx(grid_scan_root(lam, mu, k), abs=1e-12)


def test_batch_root_unstable():
    with pytest.raises(UnstableStationError):
        batch_root(StationParams(10.0, 1.0, 10))


def test_batch_metrics_reduces_to_mm1():
    assert batch_metrics(StationParams(0.5, 1.0, 1)).expected_count == pytest.approx(1.0, rel=1e-12)


def test_batch_metrics_k3():
    m = batch_metrics(StationParams(2.0, 1.0, 3))
    assert m.marginal_ratio == pytest.approx(R0_K3_LAM2, abs=1e-12)
    assert m.expected_count == pytest.approx(R0_K3_LAM2 / (1 - R0_K3_LAM2), rel=1e-10)


def test_batch_metrics_empty_and_unstable():
    assert batch_metrics(StationParams(0.0, 1.0, 4)).expected_count == 0.0
    m = batch_metrics(StationParams(4.0, 1.0, 4))
    assert not m.stable and math.isinf(m.expected_count)


@given(st.floats(1e-3, 1e6), st.floats(0.0, 0.9999))
def test_k1_reduction_property(mu, frac):
    p = StationParams(frac * mu, mu, 1)
    assert batch_root(p) == pytest.approx(frac, abs=1e-12)
    ref = mm1_metrics(p).expected_count
    assert batch_metrics(p).expected_count == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_root_monotonicity_grid():
    lams = np.linspace(0.2, 1.9, 10)  # below K*mu for every grid point
    mus = np.linspace(1.0, 3.0, 10)
    ks = [2, 3, 5, 8, 12]
    r = np.array([[[batch_root(StationParams(l, m, k)) for k in ks] for m in mus] for l in lams])
    assert np.all(np.diff(r, axis=0) > 0)
    assert np.all(np.diff(r, axis=1) < 0)
    assert np.all(np.diff(r, axis=2) < 0)


def test_joint_probability_empty_state():
    q = (0.2, 0.4, 0.6, 0.8)
    assert joint_state_probability((0, 0, 0, 0), q) == pytest.approx(math.prod(1 - x for x in q))


def test_joint_probability_direct_value():
    assert joint_state_probability((1, 1, 1, 1), (0.5,) * 4) == 0.00390625


def test_joint_probability_box_normalization(config, profile):
    rep = evaluate(config, profile)
    m = 10
    n = np.arange(m + 1)
    total = math.fsum(
        joint_state_probability((a, b, c, d), rep) for a in n for b in n for c in n for d in n
    )
    expect = math.prod(1 - x.marginal_ratio ** (m + 1) for x in rep.all_metrics)
    assert total == pytest.approx(expect, abs=1e-12)


def test_joint_probability_requires_stability(config):
    with pytest.raises(UnstableStationError):
        joint_state_probability((0, 0, 0, 0), evaluate(config, default_profile(0.2)))


def test_stability_report_boundary_and_zero():
    assert stability_report([StationParams(2.0, 2.0)]) == [False]
    assert stability_report([StationParams(0.0, 1.0), StationParams(0.0, 1.0, 10)]) == [True, True]


def test_stability_report_batch_uses_k_mu():
    assert stability_report([StationParams(9.9, 1.0, 10), StationParams(10.0, 1.0, 10)]) == [True, False]


@pytest.mark.parametrize("mix, weights", [((1 / 3,) * 3, (0.5, 0.3, 0.2)), ((0.2, 0.3, 0.5), (0.5, 0.3, 0.2))])
def test_be_loses_stability_first(config, mix, weights):
    # closed form rho_c = (lam / base) * sum(alpha * delta) / delta_c, crossing at rho_c = 1
    base = 60e6 / (8 * 1500)
    lam_per_load = 1e9 / (8 * 1500)
    s = sum(a * d for a, d in zip(mix, weights))
    crossing = {c: weights[i] / s * base / lam_per_load for i, c in enumerate(CLASSES)}
    assert crossing[BE] < crossing[AF] < crossing[EF]
    eps = 1e-6
    flags = stability_report(list(stations_for(config, TrafficProfile(mix, weights, crossing[BE] + eps))[0].values()))
    assert flags == [True, True, False]
    flags = stability_report(list(stations_for(config, TrafficProfile(mix, weights, crossing[BE] - eps))[0].values()))
    assert flags == [True, True, True]


def test_evaluate_light_load_limit(config):
    load = 1e-6
    prof = default_profile(load)
    rep = evaluate(config, prof)
    stations, stage_two = stations_for(config, prof)
    limit = 1 / stage_two.service_rate + sum(prof.mix[c] / stations[c].service_rate for c in CLASSES)
    assert rep.delay == pytest.approx(limit, rel=1e-4)
    # hand values: base 5000 pkt/s split by weights (0.5, 0.3, 0.2) under the uniform mix
    assert limit == pytest.approx(1 / 5000 + (1 / 3) * (1 / 2500 + 1 / 1500 + 1 / 1000), rel=1e-12)


def test_little_reference_value():
    lam = sum(class_arrival_rates(TrafficProfile((1 / 3,) * 3, (0.5, 0.3, 0.2), 0.3), default_config()).values())
    assert lam == pytest.approx(25000.0, rel=1e-12)
    assert little_delay(1e5 / 1500, lam) == pytest.approx(2.6667e-3, rel=1e-4)


def test_little_delay_rejects_zero_throughput():
    with pytest.raises(ValueError):
        little_delay(1.0, 0.0)


def test_evaluate_identities_random(config):
    rng = np.random.default_rng(7)
    for _ in range(100):
        mix = rng.dirichlet(np.ones(3))
        weights = rng.dirichlet(np.ones(3)) * 0.97 + 0.01
        weights = weights / weights.sum()
        prof = TrafficProfile(mix, weights, 0.5)
        stations, stage_two = stations_for(config, prof)
        bound = min(1.0 / s.utilization for s in [*stations.values(), stage_two] if s.arrival_rate > 0)
        load = 0.5 * min(bound, 1.9) * rng.uniform(0.05, 0.95)
        rep = evaluate(config, prof.with_load(load))
        assert rep.stable
        assert rep.delay * rep.throughput == pytest.approx(rep.expected_count, rel=1e-9)
        assert rep.expanded_delay() == pytest.approx(rep.delay, rel=1e-9)


def test_evaluate_unstable_is_flagged(config):
    rep = evaluate(config, default_profile(0.2))
    assert not rep.stable
    assert math.isinf(rep.delay) and math.isinf(rep.class_delays[BE])
    assert rep.stage_two.stable


def test_evaluate_zero_load(config):
    rep = evaluate(config, default_profile(0.0))
    assert rep.stable and rep.expected_count == 0.0
    assert math.isnan(rep.delay)


def test_class_delays_reconstruction(config, profile):
    rep = evaluate(config, profile)
    for c in CLASSES:
        lam_c = rep.stations[c].arrival_rate
        mu_c = rep.stations[c].service_rate
        assert rep.class_delays[c] == pytest.approx(1 / (mu_c - lam_c) + rep.stage_two_delay, rel=1e-12)
    weighted = sum(profile.mix[c] * rep.class_delays[c] for c in CLASSES)
    assert weighted == pytest.approx(rep.delay, rel=1e-12)
