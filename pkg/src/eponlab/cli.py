"""Command line: ``eponlab {analytic,simulate,sweep,validate}``.

Exit codes: 0 success, 1 configuration error, 2 failed internal check.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from eponlab.analytic import ROOT_TOL, evaluate
from eponlab.report import emit_csv, run_sweep
from eponlab.scenario import Scenario, ScenarioError, default_scenario, parse_scenario
from eponlab.sim import simulate
from eponlab.traffic import CLASSES

EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 1, 2


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _classes(values) -> dict:
    return {c.name: _num(values[c]) for c in CLASSES}


def _analytic_points(scenario: Scenario) -> list[dict]:
    out = []
    for load in scenario.loads():
        rep = evaluate(scenario.system, scenario.profile.with_load(load))
        stations = {}
        for name, params, m in zip(
            [c.name for c in CLASSES] + ["stage2"], rep.all_params, rep.all_metrics
        ):
            stations[name] = {
                "arrival_rate_pps": params.arrival_rate,
                "service_rate_pps": params.service_rate,
                "batch_size": params.batch_size,
                "utilization": m.utilization,
                "stable": m.stable,
                "expected_count_pkts": _num(m.expected_count),
                "marginal_ratio": _num(m.marginal_ratio),
            }
        out.append({
            "load": load,
            "stable": rep.stable,
            "throughput_pps": rep.throughput,
            "expected_count_pkts": _num(rep.expected_count),
            "expected_count_bytes": _num(rep.expected_count * rep.frame_length),
            "delay_s": _num(rep.delay),
            "class_delay_s": _classes(rep.class_delays),
            "stations": stations,
            "metadata": rep.metadata,
        })
    return out


def _simulation_points(scenario: Scenario) -> list[dict]:
    out = []
    for index, load in enumerate(scenario.loads()):
        sim = replace(scenario.sim, rng_seed=scenario.sim.rng_seed + index)
        rep = simulate(scenario.system, scenario.profile.with_load(load), sim)
        out.append({
            "load": load,
            "fidelity": rep.fidelity.value,
            "seed": rep.seed,
            "delay_s": _num(rep.delay),
            "delay_ci_s": _num(rep.delay_ci),
            "class_delay_s": _classes(rep.class_delay),
            "class_delay_ci_s": _classes(rep.class_delay_ci),
            "class_queue_bytes": _classes(rep.class_queue_bytes),
            "mean_in_system_pkts": _num(rep.mean_in_system),
            "arrival_rate_pps": _num(rep.arrival_rate),
            "utilization": _num(rep.utilization),
            "mean_cycle_s": _num(rep.mean_cycle),
            "max_cycle_s": _num(rep.max_cycle),
            "generated": {c.name: rep.generated[c] for c in CLASSES},
            "delivered": {c.name: rep.delivered[c] for c in CLASSES},
            "in_queue": {c.name: rep.in_queue[c] for c in CLASSES},
        })
    return out


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eponlab", description="EPON MPCP+IPACT analytic model and simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="scenario file (key = value lines)")
        p.add_argument("--output", type=Path, help="write here instead of standard output")

    common(sub.add_parser("analytic", help="closed-form metrics at each grid load (JSON)"))
    common(sub.add_parser("simulate", help="simulation at each grid load (JSON)"))
    sweep = sub.add_parser("sweep", help="figure-ready CSV over the load grid")
    common(sweep)
    sweep.add_argument("--with-sim", action="store_true", help="add simulation columns")
    val = sub.add_parser("validate", help="run the internal oracle checks")
    val.add_argument("--output", type=Path, help="write here instead of standard output")
    val.add_argument("--root-tol", type=float, default=ROOT_TOL, help=argparse.SUPPRESS)
    return parser


def _load(path: Path | None) -> Scenario:
    if path is None:
        return default_scenario()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    return parse_scenario(text)


def _write(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        from eponlab.validate import validate

        status, text = validate(args.root_tol)
        _write(text, args.output)
        return status
    try:
        scenario = _load(args.config)
    except ScenarioError as exc:
        print(f"eponlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "analytic":
        text = _json(_analytic_points(scenario))
    elif args.command == "simulate":
        text = _json(_simulation_points(scenario))
    else:
        text = emit_csv(run_sweep(scenario, with_simulation=args.with_sim))
    _write(text, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
