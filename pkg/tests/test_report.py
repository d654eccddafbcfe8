import math

import pytest

from eponlab.report import CSV_HEADER, EmptyOutputError, emit_csv, run_sweep
from eponlab.scenario import default_scenario, parse_scenario

HEADER = (
    "load,lambda_pps,rho_ef,rho_af,rho_be,rho_stage2,stable,r0,"
    "en_ef_pkts,en_af_pkts,en_be_pkts,en_stage2_pkts,en_total_bytes,"
    "et_ef_s,et_af_s,et_be_s,et_total_s,sim_et_total_s,sim_ci_s"
)
STABLE_PREFIX = "load_start = 0.004 load_end = 0.034 load_steps = 6\n"


def parse_csv(text):
    lines = text.splitlines()
    return lines[0], [dict(zip(lines[0].split(","), ln.split(","))) for ln in lines[1:]]


def test_header_exact():
    assert CSV_HEADER == HEADER


def test_single_point_two_lines():
    text = emit_csv(run_sweep(parse_scenario("load_steps = 1 load_start = 0.01")))
    assert text.endswith("\n")
    assert len(text.splitlines()) == 2


def test_default_sweep_nine_lines_all_unstable():
    text = emit_csv(run_sweep(default_scenario()))
    header, rows = parse_csv(text)
    assert header == HEADER and len(rows) == 8
    for r in rows:
        assert r["stable"] == "false"
        assert float(r["rho_be"]) >= 1.0
        assert r["en_be_pkts"] == "" and r["et_total_s"] == "" and r["en_total_bytes"] == ""


def test_rows_sorted_and_total_bytes_consistent():
    _, rows = parse_csv(emit_csv(run_sweep(parse_scenario(STABLE_PREFIX))))
    loads = [float(r["load"]) for r in rows]
    assert loads == sorted(loads)
    for r in rows:
        en = [float(r[k]) for k in ("en_ef_pkts", "en_af_pkts", "en_be_pkts", "en_stage2_pkts")]
        assert float(r["en_total_bytes"]) == 1500 * (((en[0] + en[1]) + en[2]) + en[3])


def test_delay_increases_on_stable_prefix():
    _, rows = parse_csv(emit_csv(run_sweep(parse_scenario(STABLE_PREFIX))))
    delays = [float(r["et_total_s"]) for r in rows]
    assert all(r["stable"] == "true" for r in rows)
    assert all(a < b for a, b in zip(delays, delays[1:]))


def test_delay_increases_under_guaranteed_normalization():
    sc = parse_scenario("normalization = guaranteed\nload_start = 0.05 load_end = 0.4")
    rows = run_sweep(sc)
    assert all(r.stable for r in rows)
    delays = [r.et_total for r in rows]
    assert all(a < b for a, b in zip(delays, delays[1:]))


def test_unstable_be_flagged():
    rows = run_sweep(parse_scenario("load_start = 0.04 load_steps = 1"))
    (row,) = rows
    assert row.stable_flags[:2] == (True, True) and not row.stable_flags[2]
    assert row.en_pkts[2] is None and row.et_total is None


def test_floats_round_trip():
    rows = run_sweep(parse_scenario(STABLE_PREFIX))
    _, parsed = parse_csv(emit_csv(rows))
    for row, cells in zip(rows, parsed):
        assert float(cells["et_total_s"]) == row.et_total
        assert float(cells["r0"]) == row.r0


def test_with_simulation_fills_columns():
    sc = parse_scenario("load_start = 0.02 load_steps = 1 sim_duration_s = 2")
    _, (row,) = parse_csv(emit_csv(run_sweep(sc, with_simulation=True)))
    assert math.isfinite(float(row["sim_et_total_s"])) and float(row["sim_ci_s"]) > 0


def test_empty_rows_rejected():
    with pytest.raises(EmptyOutputError):
        emit_csv([])
