"""Compare the compiled and pure-Python kernels on identical work.

Usage:
    python -m tandem_aoi.benchmark [--deliveries K] [--lambda L]
                                   [--mu a,b,c] [--policy P] [--seed S]

Both kernels are handed the same seed and the same output buffers, so
besides timing them this doubles as an end-to-end parity check: every
recorded sample must match bit for bit, or the run aborts.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ._backend import available, get_kernel
from .model import Policy, TandemConfig, validate


def _run_once(kernel_name: str, config, policy, deliveries, warmup, seed):
    run, _ = get_kernel(kernel_name)
    n = config.n
    srv = np.zeros(n + 1)
    srv[1:] = config.mu
    srv_arg = srv.tolist() if kernel_name == "python" else srv
    outs = [np.empty(deliveries) for _ in range(4)]
    ev = np.empty(deliveries, dtype=np.int64)
    rng = np.random.Generator(np.random.Philox(seed))
    t0 = time.perf_counter()
    area, window, generated, dropped, in_flight, order_ok, events = run(
        config.lam,
        srv_arg,
        1 if policy is Policy.PREEMPTIVE else 0,
        warmup,
        deliveries,
        rng,
        *outs,
        ev,
    )
    elapsed = time.perf_counter() - t0
    return elapsed, events, (area, window, generated, dropped), outs + [ev]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--deliveries", type=int, default=200_000)
    ap.add_argument("--lambda", dest="lam", type=float, default=4.0)
    ap.add_argument("--mu", default="1.5,1.5,1.5,1.5,10")
    ap.add_argument("--policy", default="preemptive")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    config = validate(TandemConfig(args.lam, [float(x) for x in args.mu.split(",")]))
    policy = Policy.parse(args.policy)
    warmup = max(1000, args.deliveries // 100)

    results = {}
    for name in available():
        elapsed, events, scalars, arrays = _run_once(
            name, config, policy, args.deliveries, warmup, args.seed
        )
        results[name] = (elapsed, events, scalars, arrays)
        print(
            f"{name:>9}: {elapsed:8.3f} s   {events / elapsed / 1e6:8.2f} M events/s"
            f"   ({events} events, {args.deliveries} deliveries)"
        )

    if len(results) == 2:
        (e_py, _, sc_py, ar_py) = results["python"]
        (e_c, _, sc_c, ar_c) = results["compiled"]
        same = sc_py == sc_c and all(
            np.array_equal(a, b) for a, b in zip(ar_py, ar_c)
        )
        if not same:
            print("MISMATCH: kernels disagree bit for bit")
            return 1
        print(f"parity: OK (bit-identical outputs); speedup x{e_py / e_c:.1f}")
    else:
        print("compiled kernel unavailable; nothing to compare against")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
