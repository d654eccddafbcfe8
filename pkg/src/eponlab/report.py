"""Load sweeps and figure-ready CSV emission."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from eponlab.analytic import AnalyticReport, evaluate
from eponlab.scenario import Scenario
from eponlab.sim import SimReport, simulate
from eponlab.traffic import CLASSES

CSV_HEADER = (
    "load,lambda_pps,rho_ef,rho_af,rho_be,rho_stage2,stable,r0,"
    "en_ef_pkts,en_af_pkts,en_be_pkts,en_stage2_pkts,en_total_bytes,"
    "et_ef_s,et_af_s,et_be_s,et_total_s,sim_et_total_s,sim_ci_s"
)


class EmptyOutputError(ValueError):
    """Nothing to emit."""


@dataclass(frozen=True)
class SweepRow:
    """One grid point. Undefined or unbounded quantities are ``None``."""

    load: float
    lambda_pps: float
    rho: tuple[float, float, float, float]
    stable_flags: tuple[bool, bool, bool, bool]
    r0: float | None
    en_pkts: tuple[float | None, float | None, float | None, float | None]
    en_total_bytes: float | None
    et: tuple[float | None, float | None, float | None]
    et_total: float | None
    frame_length: int
    sim_et_total: float | None = None
    sim_ci: float | None = None
    analytic: AnalyticReport | None = None
    simulation: SimReport | None = None

    @property
    def stable(self) -> bool:
        return all(self.stable_flags)


def _finite(x: float) -> float | None:
    return x if math.isfinite(x) else None


def row_from_report(load: float, rep: AnalyticReport) -> SweepRow:
    metrics = rep.all_metrics
    flags = tuple(m.stable for m in metrics)
    en = tuple(_finite(m.expected_count) for m in metrics)
    en_bytes = None
    if all(v is not None for v in en):
        # summed in column order so the CSV total can be recomputed exactly
        en_bytes = rep.frame_length * (((en[0] + en[1]) + en[2]) + en[3])
    return SweepRow(
        load=load,
        lambda_pps=rep.throughput,
        rho=tuple(m.utilization for m in metrics),
        stable_flags=flags,
        r0=rep.stage_two.marginal_ratio if rep.stage_two.stable else None,
        en_pkts=en,
        en_total_bytes=en_bytes,
        et=tuple(_finite(rep.class_delays[c]) for c in CLASSES),
        et_total=_finite(rep.delay),
        frame_length=rep.frame_length,
        analytic=rep,
    )


def run_sweep(scenario: Scenario, with_simulation: bool = False) -> list[SweepRow]:
    """Analytic metrics (and optionally a simulation) at every grid load."""
    rows = []
    for index, load in enumerate(scenario.loads()):
        profile = scenario.profile.with_load(load)
        row = row_from_report(load, evaluate(scenario.system, profile))
        if with_simulation:
            sim = replace(scenario.sim, rng_seed=scenario.sim.rng_seed + index)
            rep = simulate(scenario.system, profile, sim)
            row = replace(
                row,
                sim_et_total=_finite(rep.delay),
                sim_ci=_finite(rep.delay_ci),
                simulation=rep,
            )
        rows.append(row)
    return sorted(rows, key=lambda r: r.load)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if not math.isfinite(x):
        return ""
    # shortest repr that round-trips; never locale dependent
    return repr(x)


def emit_csv(rows: list[SweepRow]) -> str:
    if not rows:
        raise EmptyOutputError("no rows to emit")
    lines = [CSV_HEADER]
    for r in rows:
        cells = [
            r.load, r.lambda_pps, *r.rho, r.stable, r.r0, *r.en_pkts,
            r.en_total_bytes, *r.et, r.et_total, r.sim_et_total, r.sim_ci,
        ]
        lines.append(",".join(_fmt(c) for c in cells))
    return "\n".join(lines) + "\n"
