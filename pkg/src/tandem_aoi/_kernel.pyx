# cython: language_level=3
"""Compiled event loop for the tandem simulator (hot path).

Line-for-line mirror of _kernel_py.run; see that module for the state
layout and the determinism contract.  Keep the two in lockstep: same
variate stream, same order of arithmetic (the build disables FP
contraction so a*b+c does not silently become fma(a,b,c)).
"""

import numpy as np

cdef int BLOCK = 1 << 16


def run(
    double lam,
    double[::1] srv,
    int preemptive,
    long warmup,
    long horizon,
    object rng,
    double[::1] out_paoi,
    double[::1] out_service,
    double[::1] out_interdep,
    double[::1] out_cross,
    long[::1] out_event,
):
    """Simulate until `horizon` post-warm-up deliveries are recorded.

    Same contract as _kernel_py.run; returns (area, window, generated,
    dropped, in_flight, order_ok, events).
    """
    cdef int n = srv.shape[0] - 1
    cdef double inf = float("inf")
    cdef double[::1] comp = np.full(n + 1, inf)
    cdef double[::1] born = np.zeros(n + 1)
    cdef long[::1] ctx = np.zeros(n + 1, dtype=np.int64)

    cdef double[::1] buf = rng.standard_exponential(BLOCK)
    cdef int bi = 0

    comp[0] = buf[bi] / lam
    bi += 1

    cdef long generated = 0
    cdef long dropped = 0
    cdef long delivered = 0
    cdef long events = 0
    cdef long k = 0
    cdef int order_ok = 1
    cdef int have_gen = 0
    cdef double last_gen = 0.0
    cdef double area = 0.0
    cdef double window = 0.0
    cdef double win_t0 = 0.0
    cdef double age_after = 0.0
    cdef double prev_del_t = 0.0
    cdef double prev_gen = 0.0
    cdef double prev_t_sys = 0.0

    cdef int m, i, j
    cdef long c, e_idx, in_flight
    cdef double t, g, paoi, y

    while True:
        m = 0
        t = comp[0]
        for i in range(1, n + 1):
            if comp[i] < t:
                t = comp[i]
                m = i
        events += 1

        if m == 0:
            # exogenous arrival; draw the next arrival before any service
            # draw - the draw order is part of the determinism contract
            generated += 1
            if bi == BLOCK:
                buf = rng.standard_exponential(BLOCK)
                bi = 0
            comp[0] = t + buf[bi] / lam
            bi += 1
            if preemptive:
                if comp[1] < inf:
                    dropped += 1
                if bi == BLOCK:
                    buf = rng.standard_exponential(BLOCK)
                    bi = 0
                comp[1] = t + buf[bi] / srv[1]
                bi += 1
                born[1] = t
            else:
                if comp[1] < inf:
                    dropped += 1
                else:
                    if bi == BLOCK:
                        buf = rng.standard_exponential(BLOCK)
                        bi = 0
                    comp[1] = t + buf[bi] / srv[1]
                    bi += 1
                    born[1] = t
                    c = n + 1
                    for j in range(2, n + 1):
                        if comp[j] < inf:
                            c = j
                            break
                    ctx[1] = c
        elif m < n:
            # hand-off from server m to server m+1
            comp[m] = inf
            if preemptive:
                if comp[m + 1] < inf:
                    dropped += 1
                if bi == BLOCK:
                    buf = rng.standard_exponential(BLOCK)
                    bi = 0
                comp[m + 1] = t + buf[bi] / srv[m + 1]
                bi += 1
                born[m + 1] = born[m]
            else:
                if comp[m + 1] < inf:
                    dropped += 1
                else:
                    if bi == BLOCK:
                        buf = rng.standard_exponential(BLOCK)
                        bi = 0
                    comp[m + 1] = t + buf[bi] / srv[m + 1]
                    bi += 1
                    born[m + 1] = born[m]
                    ctx[m + 1] = ctx[m]
        else:
            # delivery at server N
            comp[n] = inf
            g = born[n]
            delivered += 1
            if have_gen and g <= last_gen:
                order_ok = 0
            have_gen = 1
            last_gen = g
            if preemptive:
                e_idx = 0
                for j in range(n, 0, -1):
                    if comp[j] < inf:
                        e_idx = j
                        break
            else:
                e_idx = ctx[n]
            if delivered > warmup:
                paoi = t - prev_gen
                y = t - prev_del_t
                out_paoi[k] = paoi
                out_service[k] = t - g
                out_interdep[k] = y
                out_cross[k] = y * prev_t_sys
                out_event[k] = e_idx
                area += 0.5 * (age_after + paoi) * y
                age_after = t - g
                prev_del_t = t
                prev_gen = g
                prev_t_sys = t - g
                k += 1
                if k == horizon:
                    window = t - win_t0
                    break
            elif delivered == warmup:
                win_t0 = t
                age_after = t - g
                prev_del_t = t
                prev_gen = g
                prev_t_sys = t - g

    in_flight = 0
    for i in range(1, n + 1):
        if comp[i] < inf:
            in_flight += 1
    return area, window, generated, dropped, in_flight, order_ok, events
