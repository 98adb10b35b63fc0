"""Hard-coded two-server peak-age formulas, used as ground truth in tests."""

from __future__ import annotations

import math

from .model import NonPositiveRate


def _check(lam: float, mu1: float, mu2: float) -> None:
    for name, v in (("lam", lam), ("mu1", mu1), ("mu2", mu2)):
        if not math.isfinite(v) or v <= 0.0:
            raise NonPositiveRate(f"{name} = {v!r} must be finite and > 0")


def paoi_preemptive_n2(lam: float, mu1: float, mu2: float) -> float:
    """Mean peak age for two servers when arrivals preempt."""
    _check(lam, mu1, mu2)
    return (
        1.0 / lam
        + 1.0 / mu1
        + 1.0 / mu2
        + 1.0 / (lam + mu1)
        + 1.0 / (lam + mu2)
        + 1.0 / (mu1 + mu2)
        - 2.0 / (lam + mu1 + mu2)
    )


def paoi_nonpreemptive_n2(lam: float, mu1: float, mu2: float) -> float:
    """Mean peak age for two servers when busy servers drop newcomers."""
    _check(lam, mu1, mu2)
    return (
        1.0 / lam
        + 2.0 / mu1
        + 2.0 / mu2
        + 1.0 / (mu1 + mu2)
        - 2.0 / (lam + mu1 + mu2)
    )
