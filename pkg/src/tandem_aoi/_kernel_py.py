"""Pure-Python event loop for the tandem simulator (fallback backend).

This is a line-for-line mirror of _kernel.pyx.  Both kernels consume
the same stream of exponential variates in the same order and restrict
themselves to IEEE add/multiply/divide in the same expression shapes,
so for a given seed they must produce bit-identical outputs (the
compiled extension is built with FP contraction disabled to keep that
true).  Any behavioral change here must be made in the .pyx as well.

State layout, indices 0..N:
  comp[0]   absolute time of the next exogenous arrival (always finite)
  comp[i]   absolute completion time at server i, +inf when idle
  born[i]   generation time of the packet occupying server i
  ctx[i]    (drop policy only) arrival context recorded when that packet
            entered server 1: nearest busy position ahead, N+1 if none

Per delivery the kernel records, into caller-allocated arrays: the peak
age (age just before the delivery), the delivered packet's system time,
the gap since the previous delivery, the product gap x previous system
time, and the conditioning-event index (highest busy position left
behind under preemption; stored arrival context under drops).
"""

from __future__ import annotations

import math

BLOCK = 1 << 16


def run(
    lam,
    srv,
    preemptive,
    warmup,
    horizon,
    rng,
    out_paoi,
    out_service,
    out_interdep,
    out_cross,
    out_event,
):
    """Simulate until `horizon` post-warm-up deliveries are recorded.

    srv is indexed by server (srv[0] unused); warmup >= 1 deliveries are
    discarded, the warmup-th delivery anchoring the measurement window.
    Returns (area, window, generated, dropped, in_flight, order_ok,
    events): the exact area under the age sawtooth over the window, the
    window length, conservation counters, whether deliveries stayed in
    generation order, and the number of events processed.
    """
    n = len(srv) - 1
    inf = math.inf
    comp = [inf] * (n + 1)
    born = [0.0] * (n + 1)
    ctx = [0] * (n + 1)

    buf = rng.standard_exponential(BLOCK).tolist()
    bi = 0

    comp[0] = buf[bi] / lam
    bi += 1

    generated = 0
    dropped = 0
    delivered = 0
    events = 0
    k = 0
    order_ok = 1
    have_gen = 0
    last_gen = 0.0
    area = 0.0
    window = 0.0
    win_t0 = 0.0
    age_after = 0.0
    prev_del_t = 0.0
    prev_gen = 0.0
    prev_t_sys = 0.0

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
                buf = rng.standard_exponential(BLOCK).tolist()
                bi = 0
            comp[0] = t + buf[bi] / lam
            bi += 1
            if preemptive:
                if comp[1] < inf:
                    dropped += 1
                if bi == BLOCK:
                    buf = rng.standard_exponential(BLOCK).tolist()
                    bi = 0
                comp[1] = t + buf[bi] / srv[1]
                bi += 1
                born[1] = t
            else:
                if comp[1] < inf:
                    dropped += 1
                else:
                    if bi == BLOCK:
                        buf = rng.standard_exponential(BLOCK).tolist()
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
                    buf = rng.standard_exponential(BLOCK).tolist()
                    bi = 0
                comp[m + 1] = t + buf[bi] / srv[m + 1]
                bi += 1
                born[m + 1] = born[m]
            else:
                if comp[m + 1] < inf:
                    dropped += 1
                else:
                    if bi == BLOCK:
                        buf = rng.standard_exponential(BLOCK).tolist()
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
