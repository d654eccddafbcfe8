"""Self-check suite run by ``eponlab validate``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from eponlab.analytic import (
    ROOT_TOL,
    StationParams,
    batch_metrics,
    batch_root,
    evaluate,
    joint_state_probability,
    mm1_metrics,
    stations_for,
)
from eponlab.core import (
    compute_guaranteed_bandwidth,
    compute_max_cycle,
    default_config,
    solve_wmax_for_cycle,
)
from eponlab.ctmc import ctmc_oracle_batch, ctmc_oracle_mm1, distribution_mean
from eponlab.sim import SimConfig, little_check, run_protocol_sim, run_queueing_sim
from eponlab.sim import kernel
from eponlab.traffic import CLASSES, TrafficProfile, default_profile


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _dimensioning(root_tol: float) -> tuple[bool, str]:
    w = solve_wmax_for_cycle(16, 1e9, 5e-6, 2e-3)
    cfg = default_config()
    bw = compute_guaranteed_bandwidth(cfg, compute_max_cycle(cfg))[0]
    ok = w == 15000 and abs(bw - 60e6) <= 1e-12 * 60e6
    return ok, f"W_MAX={w} B, guaranteed={bw:.12g} bit/s"


def _k1_reduction(root_tol: float) -> tuple[bool, str]:
    rng = np.random.default_rng(2024)
    worst_r, worst_n = 0.0, 0.0
    for _ in range(1000):
        mu = 10 ** rng.uniform(-2, 6)
        lam = rng.uniform(0.0, 0.999) * mu
        p = StationParams(lam, mu, 1)
        worst_r = max(worst_r, abs(batch_root(p, root_tol) - lam / mu))
        en = batch_metrics(p, root_tol).expected_count
        ref = mm1_metrics(p).expected_count
        if ref > 0:
            worst_n = max(worst_n, abs(en - ref) / ref)
    ok = worst_r <= 1e-12 and worst_n <= 1e-10
    return ok, f"max |r0-rho|={worst_r:.3g}, max rel E[N] gap={worst_n:.3g}"


def _ctmc_mm1(root_tol: float) -> tuple[bool, str]:
    worst = 0.0
    for rho in (0.1, 0.3, 0.5, 0.7, 0.9):
        p = ctmc_oracle_mm1(rho, 1.0)
        ref = mm1_metrics(StationParams(rho, 1.0)).expected_count
        worst = max(worst, abs(distribution_mean(p) - ref) / ref)
    return worst <= 1e-6, f"max rel gap={worst:.3g}"


def _ctmc_batch(root_tol: float) -> tuple[bool, str]:
    worst = 0.0
    for k in (1, 2, 5, 10):
        for i in range(1, 10):
            lam = 0.1 * i * k
            p = ctmc_oracle_batch(lam, 1.0, k)
            ref = batch_metrics(StationParams(lam, 1.0, k), root_tol).expected_count
            worst = max(worst, abs(distribution_mean(p) - ref) / ref)
    return worst <= 1e-6, f"max rel gap={worst:.3g} over 36 grid points"


def _product_form(root_tol: float) -> tuple[bool, str]:
    rep = evaluate(default_config(), default_profile(0.02), root_tol=root_tol)
    m = 8
    grid = np.arange(m + 1)
    total = math.fsum(
        joint_state_probability((a, b, c, d), rep)
        for a in grid for b in grid for c in grid for d in grid
    )
    expect = math.prod(1 - q ** (m + 1) for q in (x.marginal_ratio for x in rep.all_metrics))
    return abs(total - expect) <= 1e-12, f"box sum={total:.15g}, closed form={expect:.15g}"


def _little_identity(root_tol: float) -> tuple[bool, str]:
    cfg = default_config()
    worst = 0.0
    for load in np.linspace(0.002, 0.035, 12):
        rep = evaluate(cfg, default_profile(float(load)), root_tol=root_tol)
        worst = max(
            worst,
            abs(rep.delay * rep.throughput - rep.expected_count) / rep.expected_count,
            abs(rep.expanded_delay() - rep.delay) / rep.delay,
        )
    return worst <= 1e-9, f"max rel gap={worst:.3g}"


def _des_stations():
    stations, stage_two = stations_for(default_config(), default_profile(0.02))
    return [stations[c] for c in CLASSES] + [stage_two]


def _des_little(root_tol: float) -> tuple[bool, str]:
    rep = run_queueing_sim(_des_stations(), SimConfig(rng_seed=11, sim_duration=60.0))
    gap = little_check(rep, rep.arrival_rate)
    return gap < 0.02, f"discrepancy={gap:.3g} over {rep.delay_samples} packets"


def _des_determinism(root_tol: float) -> tuple[bool, str]:
    sim = SimConfig(rng_seed=5, sim_duration=5.0)
    a = run_queueing_sim(_des_stations(), sim)
    b = run_queueing_sim(_des_stations(), sim)
    ok = a == b
    detail = f"backend={kernel.BACKEND}"
    if kernel.COMPILED:
        c = run_queueing_sim(_des_stations(), sim, backend=kernel.run_network_py)
        ok = ok and c.delay == a.delay and c.station_counts == a.station_counts
        detail += ", compiled and pure-Python loops agree" if ok else ", backends disagree"
    return ok, detail


def _protocol_cycle(root_tol: float) -> tuple[bool, str]:
    cfg = default_config()
    saturated = TrafficProfile(default_profile().mix, default_profile().weights, 0.5)
    rep = run_protocol_sim(cfg, saturated, SimConfig(rng_seed=3, sim_duration=0.2, fidelity="protocol"))
    t_max = compute_max_cycle(cfg)
    guard = cfg.n_onus * cfg.guard
    ok = (abs(rep.mean_cycle - t_max) <= 0.01 * t_max
          and abs(rep.mean_guard_per_cycle - guard) <= 1e-9 * guard)
    return ok, f"mean cycle={rep.mean_cycle:.9g} s, guard/cycle={rep.mean_guard_per_cycle:.9g} s"


CHECKS: dict[str, Callable[[float], tuple[bool, str]]] = {
    "dimensioning_reference_values": _dimensioning,
    "k1_reduction": _k1_reduction,
    "ctmc_mm1_equivalence": _ctmc_mm1,
    "ctmc_batch_equivalence": _ctmc_batch,
    "product_form_normalization": _product_form,
    "little_identity_analytic": _little_identity,
    "des_little_check": _des_little,
    "des_determinism": _des_determinism,
    "protocol_cycle_saturation": _protocol_cycle,
}


def run_checks(root_tol: float = ROOT_TOL) -> list[CheckResult]:
    results = []
    for name, check in CHECKS.items():
        try:
            ok, detail = check(root_tol)
        except Exception as exc:  # noqa: BLE001 - a crash is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail))
    return results


def validate(root_tol: float = ROOT_TOL) -> tuple[int, str]:
    """Exit status (0 all pass, 2 otherwise) and a per-check report."""
    results = run_checks(root_tol)
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results]
    failed = [r.name for r in results if not r.passed]
    if failed:
        lines.append(f"{len(failed)} check(s) failed: {', '.join(failed)}")
    else:
        lines.append(f"all {len(results)} checks passed")
    return (2 if failed else 0), "\n".join(lines) + "\n"
