"""Flat ``key = value`` scenario files.

Several pairs may share a line (``mix_ef=0.2  mix_af=0.3  mix_be=0.5``);
``#`` starts a comment. Missing keys fall back to the 16-ONU, 1 Gbit/s,
2 ms cycle, 5 us guard, 1500 B frame setup.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from eponlab.core import SystemConfig, config_from_cycle
from eponlab.sim.types import Fidelity, SimConfig
from eponlab.traffic import Normalization, TrafficProfile


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario text."""


_PAIR = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^\s=]+)")

_INT_KEYS = {"n_onus", "w_max_bytes", "frame_bytes", "load_steps", "seed"}
_FLOAT_KEYS = {
    "line_rate_bps", "guard_s", "t_max_s",
    "mix_ef", "mix_af", "mix_be", "delta_ef", "delta_af", "delta_be",
    "load_start", "load_end", "sim_duration_s", "warmup_s",
}
_CHOICE_KEYS = {
    "normalization": {"channel", "guaranteed"},
    "fidelity": {"protocol", "queueing"},
}
KEYS = _INT_KEYS | _FLOAT_KEYS | set(_CHOICE_KEYS)

DEFAULTS = {
    "n_onus": 16,
    "line_rate_bps": 1e9,
    "guard_s": 5e-6,
    "t_max_s": 2e-3,
    "frame_bytes": 1500,
    "mix_ef": 1 / 3,
    "mix_af": 1 / 3,
    "mix_be": 1 / 3,
    "delta_ef": 0.5,
    "delta_af": 0.3,
    "delta_be": 0.2,
    "normalization": "channel",
    "load_start": 0.05,
    "load_end": 0.4,
    "load_steps": 8,
    "seed": 1,
    "sim_duration_s": 10.0,
    "fidelity": "queueing",
}


@dataclass(frozen=True)
class Scenario:
    system: SystemConfig
    profile: TrafficProfile
    sim: SimConfig
    load_start: float
    load_end: float
    load_steps: int

    def loads(self) -> list[float]:
        if self.load_steps == 1:
            return [self.load_start]
        step = (self.load_end - self.load_start) / (self.load_steps - 1)
        return [self.load_start + i * step for i in range(self.load_steps)]


def _convert(key: str, raw: str, lineno: int):
    try:
        if key in _INT_KEYS:
            value = float(raw)
            if not value.is_integer():
                raise ValueError
            return int(value)
        if key in _FLOAT_KEYS:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError
            return value
    except ValueError:
        raise ScenarioError(f"line {lineno}: bad value {raw!r} for {key}") from None
    if raw not in _CHOICE_KEYS[key]:
        raise ScenarioError(
            f"line {lineno}: {key} must be one of {sorted(_CHOICE_KEYS[key])}, got {raw!r}"
        )
    return raw


def parse_scenario(text: str) -> Scenario:
    values: dict = {}
    where: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        pairs = _PAIR.findall(body)
        if not pairs or _PAIR.sub("", body).strip():
            raise ScenarioError(f"line {lineno}: expected key = value, got {line.strip()!r}")
        for key, raw in pairs:
            if key not in KEYS:
                raise ScenarioError(f"line {lineno}: unknown key {key!r}")
            if key in values:
                raise ScenarioError(
                    f"line {lineno}: duplicate key {key!r} (first set on line {where[key]})"
                )
            values[key] = _convert(key, raw, lineno)
            where[key] = lineno

    if "t_max_s" in values and "w_max_bytes" in values:
        raise ScenarioError(
            f"line {max(where['t_max_s'], where['w_max_bytes'])}: "
            "t_max_s and w_max_bytes are mutually exclusive"
        )
    cfg = {**DEFAULTS, **values}

    for group in ("mix", "delta"):
        keys = [f"{group}_{c}" for c in ("ef", "af", "be")]
        total = math.fsum(cfg[k] for k in keys)
        if abs(total - 1.0) > 1e-9:
            line = max((where[k] for k in keys if k in where), default=0)
            raise ScenarioError(f"line {line}: {group}_* must sum to 1, got {total:.12g}")

    try:
        if "w_max_bytes" in values:
            system = SystemConfig.homogeneous(
                cfg["n_onus"], cfg["line_rate_bps"], cfg["guard_s"],
                cfg["frame_bytes"], cfg["w_max_bytes"],
            )
        else:
            system = config_from_cycle(
                cfg["n_onus"], cfg["line_rate_bps"], cfg["guard_s"],
                cfg["frame_bytes"], cfg["t_max_s"],
            )
        profile = TrafficProfile(
            (cfg["mix_ef"], cfg["mix_af"], cfg["mix_be"]),
            (cfg["delta_ef"], cfg["delta_af"], cfg["delta_be"]),
            cfg["load_start"],
            Normalization(cfg["normalization"]),
        )
        sim = SimConfig(
            rng_seed=cfg["seed"],
            sim_duration=cfg["sim_duration_s"],
            warmup=cfg.get("warmup_s"),
            fidelity=Fidelity(cfg["fidelity"]),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc

    start, end, steps = cfg["load_start"], cfg["load_end"], cfg["load_steps"]
    if not 0 <= start <= end < 1:
        raise ScenarioError(f"need 0 <= load_start <= load_end < 1, got {start}, {end}")
    if steps < 1:
        raise ScenarioError(f"load_steps must be >= 1, got {steps}")
    return Scenario(system, profile, sim, start, end, steps)


def default_scenario() -> Scenario:
    return parse_scenario("")
