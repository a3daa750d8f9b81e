"""Nonparametric bootstrap calibration of the variation tests."""

from __future__ import annotations

import math
from typing import Sequence

from .errors import DegenerateVariance, NumericalError
from .extrinsic import extrinsic_summary
from .frechet import TestReport, check_alpha
from .intrinsic import KarcherOptions, intrinsic_summary
from .rng import stream
from .shape_core import Shape


def _summary(sample, method, options):
    if method == "extrinsic":
        return extrinsic_summary(sample)[2]
    return intrinsic_summary(sample, options)[1]


def _studentized(sa, sb) -> tuple[float, float]:
    return sa.variation - sb.variation, math.sqrt(sa.s_sq / sa.n + sb.s_sq / sb.n)


def bootstrap_variation_test(
    a: Sequence[Shape],
    b: Sequence[Shape],
    method: str,
    replicates: int,
    seed: int,
    alpha: float = 0.05,
    options: KarcherOptions = KarcherOptions(),
) -> TestReport:
    """Variation test with a bootstrap-t p-value.

    Each replicate resamples both samples with replacement, recomputes the
    means, and studentizes the resampled difference around the observed one.
    Replicate ``r`` uses the stream ``(seed, r)``.
    """
    check_alpha(alpha)
    diff, se = _studentized(_summary(a, method, options), _summary(b, method, options))
    if not se > 0:
        raise DegenerateVariance("both samples have zero spread of squared distances")
    t_obs = diff / se
    a, b = list(a), list(b)
    exceed = 0
    used = 0
    for r in range(replicates):
        rng = stream(seed, r)
        ia = rng.integers(0, len(a), len(a))
        ib = rng.integers(0, len(b), len(b))
        try:
            d_star, se_star = _studentized(
                _summary([a[i] for i in ia], method, options),
                _summary([b[i] for i in ib], method, options),
            )
        except NumericalError:
            continue
        if not se_star > 0:
            continue
        used += 1
        if abs((d_star - diff) / se_star) >= abs(t_obs):
            exceed += 1
    p = (exceed + 1) / (used + 1)
    return TestReport(
        f"{method}_variation_bootstrap",
        t_obs,
        "bootstrap",
        p,
        alpha,
        p < alpha,
        extra={"replicates": replicates, "replicates_used": used},
    )
