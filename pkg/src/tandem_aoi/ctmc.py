"""Brute-force verifier for the state recursions via one linear solve.

The tagged-packet process of either policy, watched only at its own
jump instants, is a finite absorbing chain over pair states (a, b) with
0 <= b < a <= N+1.  Both coordinates only ever increase, so the jump
chain is a DAG: every state is visited at most once along any path.
That makes the fundamental matrix M = (I - Q)^-1 of the transient part
exactly the matrix of reach probabilities, with no over-counting.

Conditional mean reach times come from the same solve.  Let r(s) be the
total outflow rate of state s and h(s, x) the unconditional expected
time spent before absorption at x, counting only paths that do reach x.
Summing holding times over intermediate states gives

    h = M diag(1/r) M  minus the target's own holding time,

and the conditional time is t(s, x) = h(s, x) / M(s, x).  Everything is
dense float64; the chain has at most a few dozen states because the
oracle refuses N > 8 by design (it certifies the recursions, which then
scale on their own).

For the drop policy the interesting target is not a pair state but
"tagged packet delivered"; that is modeled as one extra absorbing node
fed by the (N+1, b) chain, reachable only when b walks to N+1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import IndexOutOfRange, Policy, StatePair, TandemConfig, validate

__all__ = [
    "DELIVERED",
    "Chain",
    "build_chain",
    "reach_probability",
    "reach_time",
    "all_pairs",
    "StateSpaceTooLarge",
    "UnreachableTarget",
]

MAX_SERVERS = 8

# Threshold below which a solved reach probability is indistinguishable
# from linear-algebra noise; conditioning on it would divide garbage.
PROB_FLOOR = 1e-12


class StateSpaceTooLarge(ValueError):
    """The dense solve is only meant for small systems (N <= 8)."""


class UnreachableTarget(ArithmeticError):
    """Conditional reach time requested for a ~zero-probability target."""


class _Delivered:
    def __repr__(self):
        return "DELIVERED"


#: Sentinel target for the drop policy's success event.
DELIVERED = _Delivered()


@dataclass(frozen=True)
class Chain:
    """Jump chain plus holding rates for one (config, policy)."""

    states: tuple  # StatePair entries, plus DELIVERED last for the drop policy
    index: dict
    jump: np.ndarray  # row-substochastic jump probabilities
    hold: np.ndarray  # expected holding time per state (0 for DELIVERED)


def build_chain(config: TandemConfig, policy: Policy) -> Chain:
    config = validate(config)
    n = config.n
    if n > MAX_SERVERS:
        raise StateSpaceTooLarge(f"N = {n} exceeds oracle ceiling {MAX_SERVERS}")
    pairs = [StatePair(a, b) for a in range(1, n + 2) for b in range(a)]
    states: list = list(pairs)
    if policy is Policy.NONPREEMPTIVE:
        states.append(DELIVERED)
    index = {s: k for k, s in enumerate(states)}
    m = len(states)
    jump = np.zeros((m, m))
    hold = np.zeros(m)
    for s in pairs:
        a, b = s
        k = index[s]
        ra = config.rate(a)
        rb = config.rate(b)
        tot = ra + rb
        hold[k] = 1.0 / tot
        if policy is Policy.PREEMPTIVE:
            # missing mass is the fatal move (a, b+1) with b+1 = a
            if a + 1 <= n + 1:
                jump[k, index[StatePair(a + 1, b)]] += ra / tot
            if b + 1 < a:
                jump[k, index[StatePair(a, b + 1)]] += rb / tot
        else:
            if a <= n:
                jump[k, index[StatePair(a + 1, b)]] += ra / tot
                if b + 1 < a:
                    jump[k, index[StatePair(a, b + 1)]] += rb / tot
                # else: hand-off onto the busy blocker, tagged packet dies
            else:
                # blocker gone; the tagged packet walks b -> b+1 freely
                if b + 1 <= n:
                    jump[k, index[StatePair(a, b + 1)]] += 1.0
                else:
                    jump[k, index[DELIVERED]] += 1.0
    return Chain(tuple(states), index, jump, hold)


def _solve(chain: Chain) -> tuple[np.ndarray, np.ndarray]:
    """Reach probabilities M and conditional times T (NaN where undefined)."""
    m = len(chain.states)
    reach = np.linalg.solve(np.eye(m) - chain.jump, np.eye(m))
    # expected time spent at intermediate states, restricted to x-reaching paths
    h = reach @ (chain.hold[:, None] * reach)
    h -= reach * chain.hold[None, :]  # the target's own holding time is not transit
    with np.errstate(invalid="ignore", divide="ignore"):
        times = np.where(reach > PROB_FLOOR, h / reach, np.nan)
    return reach, times


def all_pairs(config: TandemConfig, policy: Policy) -> tuple[tuple, np.ndarray, np.ndarray]:
    """(states, reach-probability matrix, conditional-time matrix).

    One solve per call; meant for sweeping every pair in tests.
    """
    chain = build_chain(config, policy)
    reach, times = _solve(chain)
    return chain.states, reach, times


def _locate(chain: Chain, state, what: str) -> int:
    if state is DELIVERED:
        if DELIVERED not in chain.index:
            raise IndexOutOfRange("DELIVERED target only exists for the drop policy")
        return chain.index[DELIVERED]
    key = StatePair(*state)
    if key not in chain.index:
        raise IndexOutOfRange(f"{what} {state} is not a live chain state")
    return chain.index[key]


def reach_probability(config: TandemConfig, policy: Policy, src, target) -> float:
    """First-passage probability src -> target, by linear solve."""
    chain = build_chain(config, policy)
    reach, _ = _solve(chain)
    return float(reach[_locate(chain, src, "src"), _locate(chain, target, "target")])


def reach_time(config: TandemConfig, policy: Policy, src, target) -> float:
    """Mean first-passage time src -> target given it happens."""
    chain = build_chain(config, policy)
    reach, times = _solve(chain)
    i = _locate(chain, src, "src")
    j = _locate(chain, target, "target")
    if not reach[i, j] > PROB_FLOOR:
        raise UnreachableTarget(
            f"reach probability {reach[i, j]:.3e} too small to condition on"
        )
    return float(times[i, j])
