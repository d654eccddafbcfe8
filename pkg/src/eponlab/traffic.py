"""Diffserv classes, offered-load decomposition and load-weighted GPS splitting."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from eponlab.core import SystemConfig, compute_guaranteed_bandwidth, compute_max_cycle


class TrafficClass(enum.IntEnum):
    """Priority classes; lower value means higher priority."""

    EF = 0
    AF = 1
    BE = 2


CLASSES: tuple[TrafficClass, ...] = (TrafficClass.EF, TrafficClass.AF, TrafficClass.BE)


class Normalization(enum.Enum):
    """What the dimensionless offered load is a fraction of."""

    CHANNEL = "channel"
    GUARANTEED = "guaranteed"


class UndefinedSharesError(ValueError):
    """Service shares need a positive global load."""


def _as_class_map(values: Mapping | Iterable[float], name: str) -> dict[TrafficClass, float]:
    if isinstance(values, Mapping):
        out = {TrafficClass[c] if isinstance(c, str) else TrafficClass(c): float(v)
               for c, v in values.items()}
    else:
        seq = [float(v) for v in values]
        if len(seq) != len(CLASSES):
            raise ValueError(f"{name} needs {len(CLASSES)} entries, got {len(seq)}")
        out = dict(zip(CLASSES, seq))
    missing = set(CLASSES) - set(out)
    if missing:
        raise ValueError(f"{name} missing classes {sorted(c.name for c in missing)}")
    return out


@dataclass(frozen=True)
class TrafficProfile:
    """Per-class load fractions, priority weights and the global offered load.

    ``mix`` and ``weights`` accept a mapping keyed by :class:`TrafficClass`
    (or its name) or a sequence ordered EF, AF, BE.
    """

    mix: Mapping[TrafficClass, float]
    weights: Mapping[TrafficClass, float]
    load: float = 0.0
    normalization: Normalization = Normalization.CHANNEL
    tol: float = field(default=1e-9, repr=False, compare=False)

    def __post_init__(self) -> None:
        mix = _as_class_map(self.mix, "mix")
        weights = _as_class_map(self.weights, "weights")
        if any(a < 0 for a in mix.values()):
            raise ValueError(f"mix fractions must be >= 0: {mix}")
        if abs(math.fsum(mix.values()) - 1.0) > self.tol:
            raise ValueError(f"mix must sum to 1, got {math.fsum(mix.values())}")
        if any(d <= 0 for d in weights.values()):
            raise ValueError(f"weights must be > 0: {weights}")
        if abs(math.fsum(weights.values()) - 1.0) > self.tol:
            raise ValueError(f"weights must sum to 1, got {math.fsum(weights.values())}")
        object.__setattr__(self, "mix", mix)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "normalization", Normalization(self.normalization))

    def with_load(self, load: float) -> "TrafficProfile":
        return TrafficProfile(self.mix, self.weights, load, self.normalization, self.tol)


@dataclass(frozen=True)
class GpsAllocation:
    shares: dict[TrafficClass, float]
    rates: dict[TrafficClass, float]
    base_rate: float
    nonempty_set: frozenset[TrafficClass]


def default_profile(load: float = 0.0) -> TrafficProfile:
    """Uniform class mix with weights (0.5, 0.3, 0.2)."""
    third = 1.0 / 3.0
    return TrafficProfile((third, third, 1.0 - 2 * third), (0.5, 0.3, 0.2), load)


def guaranteed_rate_pps(config: SystemConfig, onu_index: int = 0) -> float:
    """Minimum guaranteed bandwidth of one ONU expressed in frames per second."""
    lam_min = compute_guaranteed_bandwidth(config, compute_max_cycle(config))[onu_index]
    return lam_min / (8.0 * config.frame_length)


def class_arrival_rates(
    profile: TrafficProfile, config: SystemConfig, onu_index: int = 0
) -> dict[TrafficClass, float]:
    """Per-class Poisson arrival rates in packets/s for one ONU."""
    if not 0.0 <= profile.load < 1.0:
        raise ValueError(f"load must lie in [0, 1), got {profile.load}")
    if profile.normalization is Normalization.CHANNEL:
        total = profile.load * config.line_rate / (8.0 * config.frame_length)
    else:
        total = profile.load * guaranteed_rate_pps(config, onu_index)
    return {c: profile.mix[c] * total for c in CLASSES}


def service_shares(profile: TrafficProfile) -> dict[TrafficClass, float]:
    """Load-weighted shares phi_c = (lambda_c / lambda) * delta_c.

    The class fraction lambda_c / lambda is the mix fraction, but the ratio
    is undefined when the global load is zero.
    """
    if profile.load <= 0:
        raise UndefinedSharesError("service shares are undefined at zero load")
    return mix_shares(profile)


def mix_shares(profile: TrafficProfile) -> dict[TrafficClass, float]:
    return {c: profile.mix[c] * profile.weights[c] for c in CLASSES}


def gps_rates(
    shares: Mapping[TrafficClass, float],
    nonempty_set: Iterable[TrafficClass],
    base_rate: float,
) -> GpsAllocation:
    """Split ``base_rate`` among the nonempty queues in proportion to their shares."""
    q = frozenset(TrafficClass(c) for c in nonempty_set)
    if not q:
        raise ValueError("GPS needs at least one nonempty queue")
    if not base_rate > 0:
        raise ValueError(f"base_rate must be > 0, got {base_rate}")
    active = [c for c in CLASSES if c in q]
    denom = math.fsum(shares[c] for c in active)
    if not denom > 0:
        raise ValueError(f"nonempty queues {sorted(c.name for c in q)} have zero total share")
    rates = {c: (shares[c] / denom) * base_rate if c in q else 0.0 for c in CLASSES}
    return GpsAllocation(dict(shares), rates, base_rate, q)
