"""Discrete-event estimation layer on top of the simulation kernels.

One replication is one kernel run: empty system, a warm-up stretch of
deliveries that is discarded (the last warm-up delivery anchors the
measurement window), then `horizon` recorded deliveries.  Variates come
from a counter-based generator (Philox) seeded explicitly, so a
replication is reproducible bit for bit across runs, platforms, and
kernels.

Point estimates use every recorded sample.  Standard errors come from
batch means: delivery samples are positively autocorrelated (a long gap
stretches both the peak age and the next system time), so naive i.i.d.
errors would be optimistic.  Consecutive samples are grouped into
`batches` near-equal batches and the spread of batch means gives the
error bar; SimEstimate.n is therefore the number of batches, not raw
samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import get_kernel
from .model import DeliveryDistribution, Policy, TandemConfig, validate

__all__ = [
    "SimEstimate",
    "SimReport",
    "simulate",
    "measure_event_frequencies",
    "HorizonTooSmall",
    "MIN_HORIZON",
    "DEFAULT_BATCHES",
]

MIN_HORIZON = 1000
DEFAULT_BATCHES = 30


class HorizonTooSmall(ValueError):
    """Fewer deliveries requested than the estimators can stomach."""


@dataclass(frozen=True)
class SimEstimate:
    """A point estimate with a batch-means error bar.

    std_error is the sample standard deviation of the n batch means
    divided by sqrt(n).
    """

    mean: float
    std_error: float
    n: int


@dataclass(frozen=True)
class SimReport:
    """Everything one replication measured.

    Counters cover the whole run including warm-up; they satisfy
    generated = deliveries + drops_or_preemptions + in_flight.
    """

    policy: Policy
    paoi: SimEstimate
    aoi_time_average: SimEstimate
    mean_service: SimEstimate
    mean_interdeparture: SimEstimate
    cross_moment_yt: SimEstimate
    event_frequencies: DeliveryDistribution
    deliveries: int
    drops_or_preemptions: int
    generated: int
    in_flight: int
    warmup: int
    horizon: int
    seed: int
    backend: str


def _batch_estimate(samples: np.ndarray, batches: int) -> SimEstimate:
    b = min(batches, len(samples))
    means = np.array([chunk.mean() for chunk in np.array_split(samples, b)])
    return SimEstimate(
        mean=float(samples.mean()),
        std_error=float(means.std(ddof=1) / np.sqrt(b)),
        n=b,
    )


def _ratio_estimate(
    num: np.ndarray, den: np.ndarray, overall: float, batches: int
) -> SimEstimate:
    """Batch-means error bar for a ratio such as the time-average age."""
    b = min(batches, len(num))
    cuts = np.array_split(np.arange(len(num)), b)
    vals = np.array([num[ix].sum() / den[ix].sum() for ix in cuts])
    return SimEstimate(
        mean=overall,
        std_error=float(vals.std(ddof=1) / np.sqrt(b)),
        n=b,
    )


def simulate(
    config: TandemConfig,
    policy: Policy,
    horizon: int,
    seed: int,
    *,
    warmup: int | None = None,
    batches: int = DEFAULT_BATCHES,
    backend: str | None = None,
) -> SimReport:
    """Run one replication and summarize it.

    horizon counts post-warm-up deliveries; warmup defaults to
    max(1000, horizon // 100) discarded deliveries.
    """
    config = validate(config)
    if horizon < MIN_HORIZON:
        raise HorizonTooSmall(f"horizon {horizon} < {MIN_HORIZON}")
    if warmup is None:
        warmup = max(1000, horizon // 100)
    if warmup < 1:
        raise ValueError("warmup must be at least 1 delivery")
    if batches < 2:
        raise ValueError("need at least 2 batches for an error bar")
    run, backend_name = get_kernel(backend)

    n = config.n
    srv = np.zeros(n + 1)
    srv[1:] = config.mu
    preempt = policy is Policy.PREEMPTIVE

    out_paoi = np.empty(horizon)
    out_service = np.empty(horizon)
    out_interdep = np.empty(horizon)
    out_cross = np.empty(horizon)
    out_event = np.empty(horizon, dtype=np.int64)

    rng = np.random.Generator(np.random.Philox(seed))
    if backend_name == "python":
        srv_arg = srv.tolist()  # same doubles, faster to index in the loop
    else:
        srv_arg = srv
    area, window, generated, dropped, in_flight, order_ok, _events = run(
        config.lam,
        srv_arg,
        1 if preempt else 0,
        warmup,
        horizon,
        rng,
        out_paoi,
        out_service,
        out_interdep,
        out_cross,
        out_event,
    )
    if not order_ok:
        # unit-capacity stages cannot reorder; tripping this means a bug
        raise RuntimeError("delivery order violated generation order")

    if preempt:
        counts = np.bincount(out_event, minlength=n)[:n]
        base = 0
    else:
        counts = np.bincount(out_event, minlength=n + 2)[2 : n + 2]
        base = 2
    freqs = DeliveryDistribution(tuple(counts / horizon), index_base=base)

    # per-interval sawtooth area: gap * previous system time + gap^2 / 2
    interval_area = out_cross + 0.5 * out_interdep * out_interdep
    aoi = _ratio_estimate(interval_area, out_interdep, area / window, batches)

    return SimReport(
        policy=policy,
        paoi=_batch_estimate(out_paoi, batches),
        aoi_time_average=aoi,
        mean_service=_batch_estimate(out_service, batches),
        mean_interdeparture=_batch_estimate(out_interdep, batches),
        cross_moment_yt=_batch_estimate(out_cross, batches),
        event_frequencies=freqs,
        deliveries=warmup + horizon,
        drops_or_preemptions=int(dropped),
        generated=int(generated),
        in_flight=int(in_flight),
        warmup=warmup,
        horizon=horizon,
        seed=seed,
        backend=backend_name,
    )


def measure_event_frequencies(
    config: TandemConfig,
    policy: Policy,
    horizon: int,
    seed: int,
    *,
    backend: str | None = None,
) -> DeliveryDistribution:
    """Empirical law of the delivery conditioning event."""
    report = simulate(config, policy, horizon, seed, backend=backend)
    return report.event_frequencies
