"""Output analysis: batch means and Little's-law self-consistency."""
from __future__ import annotations

import math

import numpy as np
from scipy import stats


class UndefinedCheckError(ValueError):
    """Little's-law check needs at least one delivered packet."""


def batch_means_ci(sums: np.ndarray, counts: np.ndarray, confidence: float = 0.95):
    """Pooled mean and Student-t half-width from per-batch sums and counts.

    Batches with no samples are dropped; with fewer than two usable batches
    the half-width is ``nan``.
    """
    sums = np.asarray(sums, dtype=float)
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0:
        return math.nan, math.nan
    mean = float(sums.sum() / total)
    used = counts > 0
    if used.sum() < 2:
        return mean, math.nan
    means = sums[used] / counts[used]
    b = means.size
    half = stats.t.ppf(0.5 + confidence / 2, b - 1) * means.std(ddof=1) / math.sqrt(b)
    return mean, float(half)


def little_check(report, effective_rate: float) -> float:
    """Relative gap between E[N]/lambda and the measured mean delay."""
    if report.total_delivered == 0 or report.delay_samples == 0:
        raise UndefinedCheckError("no delivered packets: Little's law check is undefined")
    if not effective_rate > 0:
        raise UndefinedCheckError(f"effective rate must be > 0, got {effective_rate}")
    return abs(report.mean_in_system / effective_rate - report.delay) / report.delay
