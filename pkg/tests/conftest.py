"""Shared helpers for the test suite."""

import numpy as np

from tandem_aoi._backend import get_kernel
from tandem_aoi.model import Policy, TandemConfig


def random_config(rng, n, lo=0.1, hi=10.0):
    """Arrival + service rates drawn uniformly from [lo, hi]."""
    rates = rng.uniform(lo, hi, size=n + 1)
    return TandemConfig(rates[0], rates[1:])


def run_kernel_raw(backend, config, policy, horizon, warmup, seed):
    """Drive a kernel directly and hand back the raw per-delivery arrays.

    White-box access for tests that need the samples themselves (the
    public simulate() only returns summaries).
    """
    run, name = get_kernel(backend)
    n = config.n
    srv = np.zeros(n + 1)
    srv[1:] = config.mu
    srv_arg = srv.tolist() if name == "python" else srv
    out = {
        "paoi": np.empty(horizon),
        "service": np.empty(horizon),
        "interdep": np.empty(horizon),
        "cross": np.empty(horizon),
        "event": np.empty(horizon, dtype=np.int64),
    }
    rng = np.random.Generator(np.random.Philox(seed))
    area, window, generated, dropped, in_flight, order_ok, events = run(
        config.lam,
        srv_arg,
        1 if policy is Policy.PREEMPTIVE else 0,
        warmup,
        horizon,
        rng,
        out["paoi"],
        out["service"],
        out["interdep"],
        out["cross"],
        out["event"],
    )
    scalars = {
        "area": area,
        "window": window,
        "generated": generated,
        "dropped": dropped,
        "in_flight": in_flight,
        "order_ok": order_ok,
        "events": events,
    }
    return out, scalars
