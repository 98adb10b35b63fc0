"""Exact age metrics when newer updates preempt older ones.

Everything here tracks a tagged packet through the two-index state
(a, b): the tagged packet sits in server a, and b < a is the nearest
busy server behind it (b = 0 meaning only the always-busy source).
Because service is memoryless, (a, b) is a full description of the
tagged packet's future, and both the probability of surviving to a
later state and the expected time to get there satisfy one-step
recursions over this grid.

The delivery-time conditioning event used throughout is indexed by
i = 0..N-1: at the moment an update is delivered, i is the highest
busy position among the remaining servers (0 when the system has
drained back to the source).  Conditioned on that event, the next
inter-departure gap and the next system time are independent, which is
what makes the first two moments of the age process computable.

All functions are pure; memo tables are created per call.
"""

from __future__ import annotations

import math

from .model import (
    AgeReport,
    DegenerateNormalization,
    DeliveryDistribution,
    IndexOutOfRange,
    InvalidState,
    Policy,
    StatePair,
    TandemConfig,
    validate,
)

__all__ = [
    "one_step_probs",
    "reach_probability",
    "reach_time",
    "delivery_distribution",
    "interdeparture_moments",
    "conditional_mean_service",
    "mean_service",
    "cross_moment",
    "mean_paoi",
    "mean_aoi",
    "age_report",
]


def one_step_probs(config: TandemConfig, state: StatePair) -> tuple[float, float]:
    """Split the next move of a live state into (advance, chase).

    The tagged packet at a finishes first with probability
    rate(a)/(rate(a)+rate(b)), moving the state to (a+1, b); otherwise
    the trailing packet at b finishes and the state moves to (a, b+1).
    The chase probability is returned as the complement so the pair sums
    to 1.0 exactly (two independent roundings of x/tot need not).
    """
    config = validate(config)
    a, b = state
    if not (0 <= b <= config.n and 0 <= a <= config.n):
        raise IndexOutOfRange(f"state {state} outside 0..{config.n}")
    if a <= b:
        raise InvalidState(f"need b < a, got {state}")
    p_advance = config.rate(a) / (config.rate(a) + config.rate(b))
    return p_advance, 1.0 - p_advance


def _check_pair(config: TandemConfig, state: StatePair, label: str) -> None:
    a, b = state
    if not (0 <= a <= config.n + 1 and 0 <= b <= config.n + 1):
        raise IndexOutOfRange(f"{label} {state} outside 0..{config.n + 1}")


def _survival(config: TandemConfig, dst: StatePair, memo: dict | None):
    """Build the survival-probability evaluator toward a fixed target.

    Returns a closure p(a, b) giving the probability that the tagged
    packet starting in state (a, b) ever occupies state `dst` without
    being overtaken.  A state with a <= b means the chaser caught up,
    i.e. the tagged packet was preempted: that branch is worth 0.
    """
    a2, b2 = dst
    rate = config.rate

    def p(a: int, b: int) -> float:
        if a > a2 or b > b2 or a <= b:
            return 0.0
        if a == a2 and b == b2:
            return 1.0
        if memo is not None and (a, b) in memo:
            return memo[a, b]
        ra = rate(a)
        rb = rate(b)
        tot = ra + rb
        val = (ra / tot) * p(a + 1, b) + (rb / tot) * p(a, b + 1)
        if memo is not None:
            memo[a, b] = val
        return val

    return p


def reach_probability(
    config: TandemConfig,
    src: StatePair,
    dst: StatePair,
    *,
    memoize: bool = True,
) -> float:
    """Probability that the tagged packet gets from src to dst intact.

    memoize=False evaluates the recursion tree directly (exponential in
    path count, test use only); the two modes must agree bit for bit
    because they perform the same arithmetic in the same order, caching
    or not.
    """
    config = validate(config)
    _check_pair(config, src, "src")
    _check_pair(config, dst, "dst")
    p = _survival(config, dst, {} if memoize else None)
    return p(src[0], src[1])


def reach_time(config: TandemConfig, src: StatePair, dst: StatePair) -> float:
    """Expected transit time src -> dst given the packet survives.

    Dead branches (survival probability zero) take the value 0 and
    receive zero weight in their parents, so the convention never leaks
    into a reachable answer.
    """
    config = validate(config)
    _check_pair(config, src, "src")
    _check_pair(config, dst, "dst")
    a2, b2 = dst
    rate = config.rate
    p = _survival(config, dst, {})
    tmemo: dict[tuple[int, int], float] = {}

    def t(a: int, b: int) -> float:
        if a == a2 and b == b2:
            return 0.0
        if a > a2 or b > b2 or a <= b:
            return 0.0
        if (a, b) in tmemo:
            return tmemo[a, b]
        ra = rate(a)
        rb = rate(b)
        tot = ra + rb
        p1 = (ra / tot) * p(a + 1, b)
        p2 = (rb / tot) * p(a, b + 1)
        if p1 == 0.0 and p2 == 0.0:
            val = 0.0
        else:
            val = 1.0 / tot
            w = p1 + p2
            if p1 > 0.0:
                val += (p1 / w) * t(a + 1, b)
            if p2 > 0.0:
                val += (p2 / w) * t(a, b + 1)
        tmemo[a, b] = val
        return val

    return t(src[0], src[1])


def delivery_distribution(config: TandemConfig) -> DeliveryDistribution:
    """Law of the highest busy position left behind at a delivery.

    Index i in 0..N-1; the unnormalized mass of i is the probability of
    carrying a fresh packet from entry to state (N, i) and then finishing
    service at N before the trailing packet at i moves.
    """
    config = validate(config)
    n = config.n
    mu_n = config.rate(n)
    raw = []
    for i in range(n):
        surv = reach_probability(config, StatePair(1, 0), StatePair(n, i))
        raw.append(surv * mu_n / (mu_n + config.rate(i)))
    total = math.fsum(raw)
    if total <= 0.0:
        # unreachable for positive rates; a zero here means the recursion broke
        raise DegenerateNormalization(f"delivery-event masses sum to {total}")
    return DeliveryDistribution(tuple(z / total for z in raw), index_base=0)


def _gap_moments_given(config: TandemConfig, i: int) -> tuple[float, float]:
    """First two moments of the inter-delivery gap given event i.

    Given that position i was the highest busy one after a delivery, the
    next delivered update must traverse positions i..N afresh (position 0
    standing in for the source), so the gap is a sum of independent
    exponentials with those rates: mean = sum of inverse rates, second
    moment = mean^2 + sum of inverse squared rates.
    """
    inv = [1.0 / config.rate(m) for m in range(i, config.n + 1)]
    m1 = math.fsum(inv)
    m2 = m1 * m1 + math.fsum(v * v for v in inv)
    return m1, m2


def interdeparture_moments(config: TandemConfig) -> tuple[float, float]:
    """First and second moments of the gap between consecutive deliveries."""
    config = validate(config)
    dist = delivery_distribution(config)
    y1 = 0.0
    y2 = 0.0
    for i, pr in enumerate(dist.probs):
        m1, m2 = _gap_moments_given(config, i)
        y1 += pr * m1
        y2 += pr * m2
    return y1, y2


def conditional_mean_service(config: TandemConfig, i: int) -> float:
    """Mean system time of a delivered update given delivery event i.

    Transit from entry to (N, i) conditioned on survival, plus the final
    exponential race at server N against the trailing packet at i.
    """
    config = validate(config)
    if not 0 <= i <= config.n - 1:
        raise IndexOutOfRange(f"event index {i} outside 0..{config.n - 1}")
    n = config.n
    return reach_time(config, StatePair(1, 0), StatePair(n, i)) + 1.0 / (
        config.rate(n) + config.rate(i)
    )


def mean_service(config: TandemConfig) -> float:
    """Mean system time of delivered updates."""
    config = validate(config)
    dist = delivery_distribution(config)
    return math.fsum(
        pr * conditional_mean_service(config, i) for i, pr in enumerate(dist.probs)
    )


def cross_moment(config: TandemConfig) -> float:
    """Mean of (gap to next delivery) x (system time of previous delivery).

    The two factors are dependent in general, but conditioned on the
    delivery event they are independent, so the mixture of products of
    conditional means is exact.
    """
    config = validate(config)
    dist = delivery_distribution(config)
    acc = 0.0
    for i, pr in enumerate(dist.probs):
        m1, _ = _gap_moments_given(config, i)
        acc += pr * m1 * conditional_mean_service(config, i)
    return acc


def mean_paoi(config: TandemConfig) -> float:
    """Mean peak age: mean gap plus mean system time."""
    config = validate(config)
    y1, _ = interdeparture_moments(config)
    return y1 + mean_service(config)


def mean_aoi(config: TandemConfig) -> float:
    """Time-average age of the sawtooth, from the renewal-reward ratio."""
    config = validate(config)
    y1, y2 = interdeparture_moments(config)
    return 0.5 * y2 / y1 + cross_moment(config) / y1


def age_report(config: TandemConfig) -> AgeReport:
    """All preemptive metrics in one container."""
    config = validate(config)
    y1, y2 = interdeparture_moments(config)
    tbar = mean_service(config)
    z1 = cross_moment(config)
    return AgeReport(
        policy=Policy.PREEMPTIVE,
        mean_paoi=y1 + tbar,
        mean_aoi=0.5 * y2 / y1 + z1 / y1,
        mean_service=tbar,
        interdeparture_mean=y1,
        interdeparture_second_moment=y2,
        cross_moment=z1,
        delivery_distribution=delivery_distribution(config),
    )
