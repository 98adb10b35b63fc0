"""Shared types for a line of bufferless memoryless servers.

The system under study is a single source that pushes status updates
through N single-slot servers in series.  Server i works at rate mu[i-1]
and holds at most one packet; there are no queues anywhere.  Two slots
matter for the analysis, so most of the package manipulates pairs of
server indices rather than full occupancy vectors.

Index convention used throughout: position 0 is a virtual server that
models the source (its "service rate" is the generation rate lam), and
position N+1 is the monitor, which never releases what it absorbs (rate
zero).  ``TandemConfig.rate`` implements exactly this extended map.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "TandemConfig",
    "Policy",
    "StatePair",
    "DeliveryDistribution",
    "AgeReport",
    "validate",
    "NonPositiveRate",
    "EmptyServerList",
    "IndexOutOfRange",
    "InvalidState",
    "DegenerateNormalization",
]


class NonPositiveRate(ValueError):
    """A rate parameter was zero, negative, or not finite."""


class EmptyServerList(ValueError):
    """The service-rate vector has no entries."""


class IndexOutOfRange(IndexError):
    """A server index fell outside the extended range 0..N+1."""


class InvalidState(ValueError):
    """A state pair violates the ordering its policy requires."""


class DegenerateNormalization(ArithmeticError):
    """A probability vector could not be normalized (total mass ~ 0)."""


class Policy(enum.Enum):
    """Contention rule applied when a packet wants an occupied server."""

    PREEMPTIVE = "preemptive"
    NONPREEMPTIVE = "nonpreemptive"

    @classmethod
    def parse(cls, text: str) -> "Policy":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown policy {text!r}; expected 'preemptive' or 'nonpreemptive'"
            ) from None


class StatePair(NamedTuple):
    """Two tracked server positions.

    Which of the two holds the packet of interest depends on the policy:
    under preemption the tracked packet sits at ``a`` and ``b < a`` is the
    nearest busy server behind it; without preemption the tracked packet
    sits at ``b`` and ``a > b`` is the nearest busy server ahead of it.
    Either way ``b < a`` must hold.
    """

    a: int
    b: int


@dataclass(frozen=True)
class TandemConfig:
    """Arrival rate plus per-server service rates, all exponential.

    lam: generation rate of the source.
    mu:  service rates of servers 1..N, in traversal order.
    """

    lam: float
    mu: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "mu", tuple(float(m) for m in self.mu))

    @property
    def n(self) -> int:
        return len(self.mu)

    def rate(self, j: int) -> float:
        """Departure rate of the extended position j.

        j = 0 is the source (rate lam), 1..N are the real servers, and
        N+1 is the monitor, which holds forever (rate 0).
        """
        if not 0 <= j <= self.n + 1:
            raise IndexOutOfRange(f"position {j} outside 0..{self.n + 1}")
        if j == 0:
            return self.lam
        if j <= self.n:
            return self.mu[j - 1]
        return 0.0


def validate(config: TandemConfig) -> TandemConfig:
    """Check a configuration and return it unchanged.

    Every public entry point calls this before doing real work, so the
    failure mode for a bad config is the same everywhere: a typed
    exception, never a NaN that surfaces three calls later.
    """
    if not isinstance(config, TandemConfig):
        config = TandemConfig(*config)
    if config.n == 0:
        raise EmptyServerList("need at least one server")
    for name, value in [("lam", config.lam)] + [
        (f"mu[{i}]", m) for i, m in enumerate(config.mu)
    ]:
        if not math.isfinite(value) or value <= 0.0:
            raise NonPositiveRate(f"{name} = {value!r} must be finite and > 0")
    return config


@dataclass(frozen=True)
class DeliveryDistribution:
    """Distribution of the system snapshot taken at delivery instants.

    ``probs[k]`` is the probability that, the moment an update reaches
    the monitor, the relevant snapshot index equals ``index_base + k``.
    Under preemption the index is the position of the freshest packet in
    flight (0 means the system drained back to the source); without
    preemption it is the position of the blocking packet the next update
    sat behind on arrival (N+1 means it entered an empty system).
    """

    probs: tuple[float, ...]
    index_base: int

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if any(p < 0.0 or not math.isfinite(p) for p in self.probs):
            raise DegenerateNormalization(f"negative or non-finite mass: {self.probs}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > 1e-12:
            raise DegenerateNormalization(f"probabilities sum to {total!r}, not 1")

    def prob(self, index: int) -> float:
        k = index - self.index_base
        if not 0 <= k < len(self.probs):
            raise IndexOutOfRange(f"index {index} outside distribution support")
        return self.probs[k]

    @property
    def support(self) -> range:
        return range(self.index_base, self.index_base + len(self.probs))


@dataclass(frozen=True)
class AgeReport:
    """Bundle of exact age metrics for one configuration and policy.

    mean_aoi and cross_moment are None when the policy does not admit a
    closed time-average (the non-preemptive analysis here covers peaks
    only).  Invariant: mean_paoi == interdeparture_mean + mean_service.
    """

    policy: Policy
    mean_paoi: float
    mean_aoi: float | None
    mean_service: float
    interdeparture_mean: float
    interdeparture_second_moment: float
    cross_moment: float | None
    delivery_distribution: DeliveryDistribution
