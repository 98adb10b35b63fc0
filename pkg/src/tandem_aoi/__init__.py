"""Age-of-information analysis for a line of bufferless memoryless servers.

A single source pushes status updates through N single-slot exponential
servers toward a monitor.  The package computes the exact mean peak age
for both contention policies (preempt the occupant / drop the newcomer)
and the exact mean time-average age under preemption, via one-step
recursions over a two-index state.  A discrete-event simulator (with a
compiled kernel and a bit-identical Python fallback) and an absorbing
Markov chain linear-solve oracle independently check the recursions.
"""

from .model import (
    AgeReport,
    DeliveryDistribution,
    Policy,
    StatePair,
    TandemConfig,
    validate,
)
from .simulate import SimEstimate, SimReport, simulate

__version__ = "0.1.0"

__all__ = [
    "AgeReport",
    "DeliveryDistribution",
    "Policy",
    "StatePair",
    "TandemConfig",
    "validate",
    "SimEstimate",
    "SimReport",
    "simulate",
    "__version__",
]
