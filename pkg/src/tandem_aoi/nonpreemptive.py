"""Exact peak-age metrics when busy servers drop newcomers instead.

Under this policy nothing ever overtakes the tagged packet; the danger
runs the other way.  The state (a, b) now reads: the tagged packet sits
in server b, and a > b is the nearest busy server ahead of it.  The
tagged packet dies exactly when its blocker collapses onto it, i.e.
when a completion would hand the packet to a busy neighbor.

Success probabilities and conditional transit times satisfy one-step
recursions just like the preemptive case, but with a single absorbing
success condition (the blocker reaches the monitor, index N+1, after
which the path ahead of the tagged packet is clear).

Mean time-average age has no closed form here; only the peak-age mean
is analytic.  The inter-delivery gap law is shared with the preemptive
module: which packets survive differs between policies, but the busy
pattern of the servers evolves identically in law, and the gap is a
function of the busy pattern alone.
"""

from __future__ import annotations

import math

from .model import (
    AgeReport,
    DegenerateNormalization,
    DeliveryDistribution,
    IndexOutOfRange,
    Policy,
    StatePair,
    TandemConfig,
    validate,
)
from .preemptive import interdeparture_moments

__all__ = [
    "success_probability",
    "delivery_distribution",
    "reach_time",
    "mean_service",
    "mean_paoi",
    "age_report",
]


def _check_pair(config: TandemConfig, state: StatePair) -> None:
    a, b = state
    if not (0 <= a <= config.n + 1 and 0 <= b <= config.n + 1):
        raise IndexOutOfRange(f"state {state} outside 0..{config.n + 1}")


def _success(config: TandemConfig, memo: dict):
    """Evaluator for P(tagged packet is eventually delivered | state).

    Base cases: once the blocker is at the monitor (a = N+1) nothing can
    stop the tagged packet, probability 1.  The move (a, b+1) with
    b+1 = a is the fatal hand-off onto a busy server; it shows up as the
    a <= b state, probability 0.
    """
    n1 = config.n + 1
    rate = config.rate

    def s(a: int, b: int) -> float:
        if a == n1:
            return 1.0
        if a <= b:
            return 0.0
        if (a, b) in memo:
            return memo[a, b]
        ra = rate(a)
        rb = rate(b)
        tot = ra + rb
        val = (ra / tot) * s(a + 1, b) + (rb / tot) * s(a, b + 1)
        memo[a, b] = val
        return val

    return s


def success_probability(config: TandemConfig, state: StatePair) -> float:
    """Probability the packet in server b survives to delivery."""
    config = validate(config)
    _check_pair(config, state)
    return _success(config, {})(state[0], state[1])


def delivery_distribution(config: TandemConfig) -> DeliveryDistribution:
    """Law of the arrival context of a delivered update, indexed 2..N+1.

    The context of an update is the position of the nearest busy server
    ahead of it at the instant it entered server 1 (N+1 when the system
    was empty ahead).  Conditioning on delivery reweights the entry-time
    law: an update entering with context i had to find servers 2..i-1
    idle, find server i busy (the source wins the race against mu_i,
    except i = N+1 where there is no race), and then survive from (i, 1).
    """
    config = validate(config)
    n = config.n
    lam = config.lam
    s = _success(config, {})
    raw = []
    ahead_clear = 1.0  # probability servers 2..i-1 were idle on entry
    for i in range(2, n + 2):
        mu_i = config.rate(i)  # 0 at the monitor, making the race factor 1
        raw.append(ahead_clear * (lam / (lam + mu_i)) * s(i, 1))
        if i <= n:
            ahead_clear *= config.rate(i) / (config.rate(i) + lam)
    total = math.fsum(raw)
    if total <= 0.0:
        raise DegenerateNormalization(f"arrival-context masses sum to {total}")
    return DeliveryDistribution(tuple(z / total for z in raw), index_base=2)


def reach_time(config: TandemConfig, state: StatePair) -> float:
    """Expected time until delivery from (a, b), given delivery happens.

    Once the blocker is absorbed at the monitor the tagged packet just
    walks the remaining servers, so that tail is the plain sum of mean
    service times; before then each branch is weighted by its success
    probability, and doomed branches carry weight 0.
    """
    config = validate(config)
    _check_pair(config, state)
    n1 = config.n + 1
    rate = config.rate
    s = _success(config, {})
    memo: dict[tuple[int, int], float] = {}

    def t(a: int, b: int) -> float:
        if b == n1:
            return 0.0
        if a == n1:
            # unblocked: walk servers b..N one mean service time each
            return math.fsum(1.0 / rate(j) for j in range(b, n1))
        if a <= b:
            return 0.0
        if (a, b) in memo:
            return memo[a, b]
        ra = rate(a)
        rb = rate(b)
        tot = ra + rb
        p1 = (ra / tot) * s(a + 1, b)
        p2 = (rb / tot) * s(a, b + 1)
        if p1 == 0.0 and p2 == 0.0:
            val = 0.0
        else:
            val = 1.0 / tot
            w = p1 + p2
            if p1 > 0.0:
                val += (p1 / w) * t(a + 1, b)
            if p2 > 0.0:
                val += (p2 / w) * t(a, b + 1)
        memo[a, b] = val
        return val

    return t(state[0], state[1])


def mean_service(config: TandemConfig) -> float:
    """Mean system time of delivered updates (entry at server 1 to sink)."""
    config = validate(config)
    dist = delivery_distribution(config)
    return math.fsum(
        pr * reach_time(config, StatePair(i, 1))
        for i, pr in zip(dist.support, dist.probs)
    )


def mean_paoi(config: TandemConfig) -> float:
    """Mean peak age: shared mean gap plus this policy's mean system time."""
    config = validate(config)
    y1, _ = interdeparture_moments(config)
    return y1 + mean_service(config)


def age_report(config: TandemConfig) -> AgeReport:
    """All non-preemptive metrics; time-average age fields are None."""
    config = validate(config)
    y1, y2 = interdeparture_moments(config)
    tbar = mean_service(config)
    return AgeReport(
        policy=Policy.NONPREEMPTIVE,
        mean_paoi=y1 + tbar,
        mean_aoi=None,
        mean_service=tbar,
        interdeparture_mean=y1,
        interdeparture_second_moment=y2,
        cross_moment=None,
        delivery_distribution=delivery_distribution(config),
    )
