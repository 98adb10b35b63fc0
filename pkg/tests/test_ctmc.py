"""Tests for the linear-solve verifier itself (worked values, guards).

The full recursion-vs-solve sweep lives in test_acceptance; these pin
the oracle's own behavior on cases small enough to check by hand.
"""

import numpy as np
import pytest

from tandem_aoi import ctmc
from tandem_aoi.model import IndexOutOfRange, Policy, StatePair, TandemConfig

CFG = TandemConfig(1.0, [2.0, 3.0])


def test_preemptive_reach_probability_worked_values():
    got = ctmc.reach_probability(CFG, Policy.PREEMPTIVE, (1, 0), (2, 1))
    assert abs(got - 1 / 6) < 1e-12
    assert ctmc.reach_probability(CFG, Policy.PREEMPTIVE, (2, 1), (2, 1)) == 1.0


def test_preemptive_reach_probability_dead_target():
    # the trailing index cannot decrease
    got = ctmc.reach_probability(CFG, Policy.PREEMPTIVE, (2, 1), (3, 0))
    assert abs(got) < 1e-12


def test_preemptive_reach_time_worked_values():
    got = ctmc.reach_time(CFG, Policy.PREEMPTIVE, (1, 0), (2, 1))
    assert abs(got - 7 / 12) < 1e-12
    assert ctmc.reach_time(CFG, Policy.PREEMPTIVE, (2, 0), (2, 0)) == 0.0


def test_nonpreemptive_success_worked_values():
    got = ctmc.reach_probability(CFG, Policy.NONPREEMPTIVE, (2, 1), ctmc.DELIVERED)
    assert abs(got - 3 / 5) < 1e-12
    got = ctmc.reach_time(CFG, Policy.NONPREEMPTIVE, (2, 1), ctmc.DELIVERED)
    assert abs(got - 31 / 30) < 1e-12


def test_unreachable_target_raises():
    with pytest.raises(ctmc.UnreachableTarget):
        ctmc.reach_time(CFG, Policy.PREEMPTIVE, (2, 1), (3, 0))


def test_delivered_target_requires_drop_policy():
    with pytest.raises(IndexOutOfRange):
        ctmc.reach_probability(CFG, Policy.PREEMPTIVE, (1, 0), ctmc.DELIVERED)


def test_state_space_ceiling():
    big = TandemConfig(1.0, [1.0] * 9)
    with pytest.raises(ctmc.StateSpaceTooLarge):
        ctmc.build_chain(big, Policy.PREEMPTIVE)


def test_chain_rows_are_substochastic():
    for policy in (Policy.PREEMPTIVE, Policy.NONPREEMPTIVE):
        chain = ctmc.build_chain(TandemConfig(0.8, [2.0, 0.4, 5.0]), policy)
        sums = chain.jump.sum(axis=1)
        assert np.all(sums <= 1.0 + 1e-12)
        assert np.all(chain.jump >= 0.0)


def test_all_pairs_shapes_and_identity():
    states, probs, times = ctmc.all_pairs(CFG, Policy.PREEMPTIVE)
    m = len(states)
    assert probs.shape == (m, m) and times.shape == (m, m)
    assert np.allclose(np.diag(probs), 1.0)
    assert np.allclose(np.diag(times), 0.0)
    # live pair states for N=2: all 0 <= b < a <= 3
    assert StatePair(3, 2) in states and len(states) == 6
