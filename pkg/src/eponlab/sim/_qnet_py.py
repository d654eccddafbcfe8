"""Pure-Python event loop for the two-stage queueing network.

Mirrors ``_qnet.pyx`` operation for operation (same RNG block consumption,
same floating-point expression order) so both produce identical results.
"""
from collections import deque

import numpy as np

BLOCK = 1 << 16
INF = float("inf")


def run_network(lam, mu, mu2, k, warmup, end, n_batches, rng):
    """Simulate three M/M/1 class queues feeding one bulk server.

    Returns a dict of raw accumulators; see ``network.run_queueing_sim``.
    """
    buf = rng.standard_exponential(BLOCK)
    pos = 0

    span = end - warmup
    q1 = [deque(), deque(), deque()]
    q2_time = deque()
    q2_cls = deque()
    n2_cls = [0, 0, 0]
    next_arr = [INF, INF, INF]
    next_dep = [INF, INF, INF]
    next_dep2 = INF

    generated = [0, 0, 0]
    delivered = [0, 0, 0]
    arrivals_window = 0
    delay_sum = np.zeros((3, n_batches))
    delay_cnt = np.zeros((3, n_batches), dtype=np.int64)
    area_station = [0.0, 0.0, 0.0, 0.0]
    area_class = [0.0, 0.0, 0.0]
    busy2 = 0.0

    for c in range(3):
        if lam[c] > 0.0:
            if pos == BLOCK:
                buf = rng.standard_exponential(BLOCK)
                pos = 0
            next_arr[c] = buf[pos] / lam[c]
            pos += 1

    t = 0.0
    while True:
        # departures before arrivals; stage two first, then classes in priority order
        ev = 0
        t_ev = next_dep2
        for c in range(3):
            if next_dep[c] < t_ev:
                t_ev = next_dep[c]
                ev = 1 + c
        for c in range(3):
            if next_arr[c] < t_ev:
                t_ev = next_arr[c]
                ev = 4 + c

        t_stop = t_ev if t_ev < end else end
        lo = t if t > warmup else warmup
        if t_stop > lo:
            dt = t_stop - lo
            n2 = len(q2_time)
            for c in range(3):
                area_station[c] += len(q1[c]) * dt
                area_class[c] += (len(q1[c]) + n2_cls[c]) * dt
            area_station[3] += n2 * dt
            if n2 > 0:
                busy2 += dt
        if t_ev >= end:
            break
        t = t_ev

        if ev >= 4:
            c = ev - 4
            generated[c] += 1
            if t >= warmup:
                arrivals_window += 1
            q1[c].append(t)
            if pos == BLOCK:
                buf = rng.standard_exponential(BLOCK)
                pos = 0
            next_arr[c] = t + buf[pos] / lam[c]
            pos += 1
            if len(q1[c]) == 1:
                if pos == BLOCK:
                    buf = rng.standard_exponential(BLOCK)
                    pos = 0
                next_dep[c] = t + buf[pos] / mu[c]
                pos += 1
        elif ev >= 1:
            c = ev - 1
            a = q1[c].popleft()
            q2_time.append(a)
            q2_cls.append(c)
            n2_cls[c] += 1
            if len(q1[c]) > 0:
                if pos == BLOCK:
                    buf = rng.standard_exponential(BLOCK)
                    pos = 0
                next_dep[c] = t + buf[pos] / mu[c]
                pos += 1
            else:
                next_dep[c] = INF
            if len(q2_time) == 1:
                if pos == BLOCK:
                    buf = rng.standard_exponential(BLOCK)
                    pos = 0
                next_dep2 = t + buf[pos] / mu2
                pos += 1
        else:
            served = k if len(q2_time) > k else len(q2_time)
            for _ in range(served):
                a = q2_time.popleft()
                c = q2_cls.popleft()
                n2_cls[c] -= 1
                delivered[c] += 1
                if a >= warmup:
                    b = int((a - warmup) / span * n_batches)
                    if b >= n_batches:
                        b = n_batches - 1
                    delay_sum[c, b] += t - a
                    delay_cnt[c, b] += 1
            if len(q2_time) > 0:
                if pos == BLOCK:
                    buf = rng.standard_exponential(BLOCK)
                    pos = 0
                next_dep2 = t + buf[pos] / mu2
                pos += 1
            else:
                next_dep2 = INF

    in_queue = [len(q1[c]) + n2_cls[c] for c in range(3)]
    return {
        "generated": generated,
        "delivered": delivered,
        "in_queue": in_queue,
        "arrivals_window": arrivals_window,
        "delay_sum": delay_sum,
        "delay_cnt": delay_cnt,
        "area_station": list(area_station),
        "area_class": list(area_class),
        "busy2": busy2,
    }
