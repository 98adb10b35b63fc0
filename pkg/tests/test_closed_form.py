import pytest

from tandem_aoi import closed_form, nonpreemptive, preemptive
from tandem_aoi.model import NonPositiveRate, TandemConfig

GRID = [0.25, 0.5, 1.0, 2.0, 4.0]


def test_preemptive_published_values():
    assert abs(closed_form.paoi_preemptive_n2(1, 2, 3) - 137 / 60) < 1e-12
    assert abs(closed_form.paoi_preemptive_n2(1, 1, 1) - 23 / 6) < 1e-12


def test_nonpreemptive_published_values():
    assert abs(closed_form.paoi_nonpreemptive_n2(1, 2, 3) - 38 / 15) < 1e-12
    assert abs(closed_form.paoi_nonpreemptive_n2(1, 1, 1) - 29 / 6) < 1e-12


def test_preemptive_saturation_limit():
    # lam -> inf: source terms vanish, peak age -> 1/m1 + 1/m2 + 1/(m1+m2)
    m1, m2 = 2.0, 3.0
    want = 1 / m1 + 1 / m2 + 1 / (m1 + m2)
    assert abs(closed_form.paoi_preemptive_n2(1e6, m1, m2) - want) < 1e-4


def test_nonpreemptive_symmetric_in_service_rates():
    for m1 in GRID:
        for m2 in GRID:
            assert closed_form.paoi_nonpreemptive_n2(1.3, m1, m2) == pytest.approx(
                closed_form.paoi_nonpreemptive_n2(1.3, m2, m1), abs=1e-15
            )


def test_rejects_nonpositive_rates():
    with pytest.raises(NonPositiveRate):
        closed_form.paoi_preemptive_n2(0.0, 1.0, 1.0)
    with pytest.raises(NonPositiveRate):
        closed_form.paoi_nonpreemptive_n2(1.0, -2.0, 1.0)


def test_matches_recursions_on_grid():
    for lam in GRID:
        for m1 in GRID:
            for m2 in GRID:
                cfg = TandemConfig(lam, [m1, m2])
                assert abs(
                    preemptive.mean_paoi(cfg) - closed_form.paoi_preemptive_n2(lam, m1, m2)
                ) < 1e-10
                assert abs(
                    nonpreemptive.mean_paoi(cfg)
                    - closed_form.paoi_nonpreemptive_n2(lam, m1, m2)
                ) < 1e-10


def test_two_server_interdeparture_mean():
    # the N=2 gap mean has its own printed form
    for lam in GRID:
        for m1 in GRID:
            for m2 in GRID:
                y1 = preemptive.interdeparture_moments(TandemConfig(lam, [m1, m2]))[0]
                want = 1 / lam + 1 / m1 + 1 / m2 - 1 / (lam + m1 + m2)
                assert abs(y1 - want) < 1e-12
