"""Truncated Markov-chain solvers used to check the closed forms.

These never call the closed-form expected counts; the batch chain is solved
as a linear system on its truncated generator.
"""
from __future__ import annotations

import math

import numpy as np

from eponlab.analytic import StationParams, UnstableStationError, batch_root

TAIL_BOUND = 1e-10


class TruncationTooSmallError(ValueError):
    """Geometric tail beyond the truncation level exceeds the bound."""


def truncation_level(ratio: float, tail: float = TAIL_BOUND) -> int:
    """Smallest M with ratio^(M+1) < tail."""
    if ratio <= 0.0:
        return 1
    return max(1, math.ceil(math.log(tail) / math.log(ratio)))


def ctmc_oracle_mm1(lam: float, mu: float, truncation: int | None = None) -> np.ndarray:
    """Birth-death chain on {0..M} solved by the balance recursion p[n+1] = p[n]*lam/mu."""
    if not lam < mu:
        raise UnstableStationError(f"lambda={lam} >= mu={mu}")
    rho = lam / mu
    m = truncation_level(rho) if truncation is None else truncation
    if rho > 0 and rho ** (m + 1) >= TAIL_BOUND:
        raise TruncationTooSmallError(f"tail rho^(M+1)={rho ** (m + 1):.3g} with M={m}")
    p = np.empty(m + 1)
    p[0] = 1.0
    for n in range(m):
        p[n + 1] = p[n] * lam / mu
    return p / p.sum()


def batch_generator(lam: float, mu: float, k: int, m: int) -> np.ndarray:
    """Generator of the bulk-service chain truncated at M (arrivals blocked at M)."""
    q = np.zeros((m + 1, m + 1))
    for n in range(m + 1):
        if n < m:
            q[n, n + 1] += lam
        if n > 0:
            q[n, max(n - k, 0)] += mu
    q[np.diag_indices_from(q)] = -q.sum(axis=1)
    return q


def ctmc_oracle_batch(
    lam: float, mu: float, k: int, truncation: int | None = None
) -> np.ndarray:
    """Stationary law of the truncated M/M^Y/1 chain via a dense linear solve."""
    if not lam < k * mu:
        raise UnstableStationError(f"lambda={lam} >= K*mu={k * mu}")
    if lam == 0.0:
        m = 1 if truncation is None else truncation
        p = np.zeros(m + 1)
        p[0] = 1.0
        return p
    r0 = batch_root(StationParams(lam, mu, k))
    m = truncation_level(r0) if truncation is None else truncation
    if r0 ** (m + 1) >= TAIL_BOUND:
        raise TruncationTooSmallError(f"tail r0^(M+1)={r0 ** (m + 1):.3g} with M={m}")
    # rates scaled by mu keep the system well conditioned
    a = batch_generator(lam / mu, 1.0, k, m).T
    a[-1, :] = 1.0
    b = np.zeros(m + 1)
    b[-1] = 1.0
    p = np.linalg.solve(a, b)
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def distribution_mean(p: np.ndarray) -> float:
    return float(np.dot(np.arange(p.size), p))
