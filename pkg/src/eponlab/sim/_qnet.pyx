# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled event loop for the two-stage queueing network.

Kept in lock-step with ``_qnet_py.run_network``; any change to one must be
mirrored in the other or the parity test fails.
"""
import numpy as np

from libcpp.deque cimport deque

cdef enum:
    BLOCK = 65536

cdef double INF = float("inf")


cdef class _ExpStream:
    cdef object rng
    cdef double[::1] buf
    cdef Py_ssize_t pos

    def __init__(self, rng):
        self.rng = rng
        self.buf = rng.standard_exponential(BLOCK)
        self.pos = 0

    cdef inline double draw(self):
        cdef double e
        if self.pos == BLOCK:
            self.buf = self.rng.standard_exponential(BLOCK)
            self.pos = 0
        e = self.buf[self.pos]
        self.pos += 1
        return e


def run_network(lam, mu, double mu2, int k, double warmup, double end,
                int n_batches, rng):
    cdef _ExpStream stream = _ExpStream(rng)
    cdef double lam_c[3]
    cdef double mu_c[3]
    cdef double next_arr[3]
    cdef double next_dep[3]
    cdef double next_dep2 = INF
    cdef long long generated[3]
    cdef long long delivered[3]
    cdef long long n2_cls[3]
    cdef double area_station[4]
    cdef double area_class[3]
    cdef double busy2 = 0.0
    cdef long long arrivals_window = 0
    cdef deque[double] q1[3]
    cdef deque[double] q2_time
    cdef deque[int] q2_cls
    cdef double span = end - warmup
    cdef double t = 0.0, t_ev, t_stop, lo, dt, a
    cdef int ev, c, i, served, b
    cdef Py_ssize_t n2

    delay_sum_arr = np.zeros((3, n_batches))
    delay_cnt_arr = np.zeros((3, n_batches), dtype=np.int64)
    cdef double[:, ::1] delay_sum = delay_sum_arr
    cdef long long[:, ::1] delay_cnt = delay_cnt_arr

    for c in range(3):
        lam_c[c] = lam[c]
        mu_c[c] = mu[c]
        next_arr[c] = INF
        next_dep[c] = INF
        generated[c] = 0
        delivered[c] = 0
        n2_cls[c] = 0
        area_station[c] = 0.0
        area_class[c] = 0.0
    area_station[3] = 0.0

    for c in range(3):
        if lam_c[c] > 0.0:
            next_arr[c] = stream.draw() / lam_c[c]

    while True:
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
            n2 = q2_time.size()
            for c in range(3):
                area_station[c] += <double>q1[c].size() * dt
                area_class[c] += <double>(<long long>q1[c].size() + n2_cls[c]) * dt
            area_station[3] += <double>n2 * dt
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
            q1[c].push_back(t)
            next_arr[c] = t + stream.draw() / lam_c[c]
            if q1[c].size() == 1:
                next_dep[c] = t + stream.draw() / mu_c[c]
        elif ev >= 1:
            c = ev - 1
            a = q1[c].front()
            q1[c].pop_front()
            q2_time.push_back(a)
            q2_cls.push_back(c)
            n2_cls[c] += 1
            if q1[c].size() > 0:
                next_dep[c] = t + stream.draw() / mu_c[c]
            else:
                next_dep[c] = INF
            if q2_time.size() == 1:
                next_dep2 = t + stream.draw() / mu2
        else:
            served = k if <Py_ssize_t>q2_time.size() > k else <int>q2_time.size()
            for i in range(served):
                a = q2_time.front()
                q2_time.pop_front()
                c = q2_cls.front()
                q2_cls.pop_front()
                n2_cls[c] -= 1
                delivered[c] += 1
                if a >= warmup:
                    b = <int>((a - warmup) / span * n_batches)
                    if b >= n_batches:
                        b = n_batches - 1
                    delay_sum[c, b] += t - a
                    delay_cnt[c, b] += 1
            if q2_time.size() > 0:
                next_dep2 = t + stream.draw() / mu2
            else:
                next_dep2 = INF

    return {
        "generated": [generated[c] for c in range(3)],
        "delivered": [delivered[c] for c in range(3)],
        "in_queue": [<long long>q1[c].size() + n2_cls[c] for c in range(3)],
        "arrivals_window": arrivals_window,
        "delay_sum": delay_sum_arr,
        "delay_cnt": delay_cnt_arr,
        "area_station": [area_station[c] for c in range(4)],
        "area_class": [area_class[c] for c in range(3)],
        "busy2": busy2,
    }
