"""Simulator behavior: determinism, kernel parity, internal consistency.

Statistical agreement with the analytic values at scale lives in
test_acceptance; here the runs are short and the assertions structural.
"""

import numpy as np
import pytest

from conftest import run_kernel_raw
from tandem_aoi import preemptive as pre
from tandem_aoi._backend import available
from tandem_aoi.model import Policy, TandemConfig
from tandem_aoi.simulate import HorizonTooSmall, simulate

CFG = TandemConfig(1.0, [2.0, 3.0])
BOTH = (Policy.PREEMPTIVE, Policy.NONPREEMPTIVE)

needs_compiled = pytest.mark.skipif(
    "compiled" not in available(), reason="compiled kernel not built"
)


def test_horizon_too_small():
    with pytest.raises(HorizonTooSmall):
        simulate(CFG, Policy.PREEMPTIVE, 999, seed=1)


def test_parameter_guards():
    with pytest.raises(ValueError):
        simulate(CFG, Policy.PREEMPTIVE, 2000, seed=1, warmup=0)
    with pytest.raises(ValueError):
        simulate(CFG, Policy.PREEMPTIVE, 2000, seed=1, batches=1)
    with pytest.raises(ValueError):
        simulate(CFG, Policy.PREEMPTIVE, 2000, seed=1, backend="gpu")


@pytest.mark.parametrize("policy", BOTH)
def test_repeat_runs_are_identical(policy):
    a = simulate(CFG, policy, 3000, seed=42)
    b = simulate(CFG, policy, 3000, seed=42)
    assert a == b  # dataclass equality covers every field bit for bit


def test_different_seeds_differ():
    a = simulate(CFG, Policy.PREEMPTIVE, 3000, seed=1)
    b = simulate(CFG, Policy.PREEMPTIVE, 3000, seed=2)
    assert a.paoi.mean != b.paoi.mean


@needs_compiled
@pytest.mark.parametrize("policy", BOTH)
def test_kernel_parity_bitwise(policy):
    """The compiled and Python kernels must agree to the last bit."""
    for cfg in (CFG, TandemConfig(2.7, [0.6, 1.9, 1.1, 3.3])):
        out_py, sc_py = run_kernel_raw("python", cfg, policy, 5000, 100, seed=9)
        out_c, sc_c = run_kernel_raw("compiled", cfg, policy, 5000, 100, seed=9)
        assert sc_py == sc_c
        for key in out_py:
            assert np.array_equal(out_py[key], out_c[key]), key


@pytest.mark.parametrize("policy", BOTH)
def test_conservation_counters(policy):
    rep = simulate(CFG, policy, 20_000, seed=3)
    assert rep.generated == rep.deliveries + rep.drops_or_preemptions + rep.in_flight
    assert 0 <= rep.in_flight <= CFG.n


@pytest.mark.parametrize("policy", BOTH)
def test_sawtooth_area_consistency(policy):
    """Direct area under the age curve vs its per-interval decomposition.

    Each inter-delivery interval contributes gap * previous system time
    plus gap^2/2; the kernel's running trapezoid total must match that
    reconstruction to rounding error.
    """
    out, sc = run_kernel_raw(None, CFG, policy, 50_000, 1000, seed=5)
    direct = sc["area"] / sc["window"]
    rebuilt = (out["cross"] + 0.5 * out["interdep"] ** 2).sum() / out["interdep"].sum()
    assert abs(direct - rebuilt) / direct < 1e-9
    # the window itself telescopes to the sum of gaps
    assert abs(sc["window"] - out["interdep"].sum()) / sc["window"] < 1e-9


@pytest.mark.parametrize("policy", BOTH)
def test_peak_decomposes_into_gap_plus_previous_service(policy):
    # peak_k = gap_k + system_(k-1) holds per sample; means line up to
    # a boundary term, far inside the combined error bars
    rep = simulate(CFG, policy, 50_000, seed=6)
    lhs = rep.paoi.mean
    rhs = rep.mean_interdeparture.mean + rep.mean_service.mean
    tol = 3.0 * np.hypot(
        rep.paoi.std_error,
        np.hypot(rep.mean_interdeparture.std_error, rep.mean_service.std_error),
    )
    assert abs(lhs - rhs) <= tol


def test_event_frequencies_single_server_degenerate():
    for policy in BOTH:
        rep = simulate(TandemConfig(2.0, [1.0]), policy, 2000, seed=8)
        assert rep.event_frequencies.probs == (1.0,)


def test_estimate_error_bars_from_batch_means():
    rep = simulate(CFG, Policy.PREEMPTIVE, 30_000, seed=10)
    out, _ = run_kernel_raw(None, CFG, Policy.PREEMPTIVE, 30_000, 1000, seed=10)
    chunks = np.array_split(out["paoi"], rep.paoi.n)
    means = np.array([c.mean() for c in chunks])
    assert rep.paoi.n == 30
    assert rep.paoi.std_error == pytest.approx(
        means.std(ddof=1) / np.sqrt(len(means)), rel=1e-12
    )
    assert rep.paoi.mean == pytest.approx(out["paoi"].mean(), rel=1e-12)


def test_cross_moment_estimate_tracks_analytic():
    rep = simulate(CFG, Policy.PREEMPTIVE, 200_000, seed=11)
    want = pre.cross_moment(CFG)
    assert abs(rep.cross_moment_yt.mean - want) <= 4 * rep.cross_moment_yt.std_error


def test_warmup_default_and_report_fields():
    rep = simulate(CFG, Policy.PREEMPTIVE, 200_000, seed=12)
    assert rep.warmup == 2000
    assert rep.horizon == 200_000
    assert rep.deliveries == 202_000
    assert rep.backend in available()
