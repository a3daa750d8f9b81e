"""Monte Carlo check of the asymptotic null distributions of the mean tests."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import statdist
from .extrinsic import extrinsic_mean_test
from .intrinsic import KarcherOptions, intrinsic_mean_test
from .rng import stream
from .simulate import SimSpec, simulate_sample

METHODS = ("extrinsic", "intrinsic")


def ks_distance(values, cdf) -> float:
    """Kolmogorov-Smirnov distance between the empirical law of ``values`` and ``cdf``."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    f = np.array([cdf(v) for v in x])
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


@dataclass
class MethodCalibration:
    method: str
    df: int
    statistics: list
    p_values: list
    rejection_rate: Optional[float]
    ks_distance: Optional[float]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "df": self.df,
            "replicates": len(self.statistics),
            "rejection_rate": self.rejection_rate,
            "ks_distance": self.ks_distance,
            "statistics": self.statistics,
        }


@dataclass
class CalibrationReport:
    k: int
    n: int
    m: int
    noise_sd: float
    alpha: float
    seed: int
    replicates: int
    methods: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "m": self.m,
            "noise_sd": self.noise_sd,
            "alpha": self.alpha,
            "seed": self.seed,
            "replicates": self.replicates,
            "methods": [mc.to_dict() for mc in self.methods.values()],
            "failures": self.failures,
        }


def null_replicate(args) -> dict:
    """Both mean tests on one pair of samples drawn from the same distribution.

    Replicate ``r`` draws from its own stream keyed by ``(seed, r)``.
    """
    spec_a, spec_b, seed, r, alpha, methods, options = args
    rng = stream(seed, r)
    a = simulate_sample(spec_a, rng)
    b = simulate_sample(spec_b, rng)
    out = {}
    for method in methods:
        try:
            if method == "extrinsic":
                rep = extrinsic_mean_test(a, b, alpha)
            else:
                rep = intrinsic_mean_test(a, b, alpha, options)
            out[method] = (rep.statistic, rep.p_value)
        except ArithmeticError as exc:
            out[method] = repr(exc)
    return out


def calibrate(
    spec: SimSpec,
    m: int,
    replicates: int,
    seed: int,
    alpha: float = 0.05,
    methods=METHODS,
    options: KarcherOptions = KarcherOptions(),
    workers: int = 1,
) -> CalibrationReport:
    """Run ``replicates`` null two-sample mean tests and compare with chi^2_{2k-4}.

    Results are gathered in replicate order, so the report does not depend on
    ``workers``.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    methods = tuple(methods)
    spec_b = SimSpec(spec.template, spec.noise_sd, m)
    jobs = [(spec, spec_b, seed, r, alpha, methods, options) for r in range(replicates)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(null_replicate, jobs, chunksize=max(1, replicates // (4 * workers))))
    else:
        results = [null_replicate(j) for j in jobs]

    k = spec.template.k
    df = 2 * k - 4
    report = CalibrationReport(k, spec.n, m, spec.noise_sd, alpha, seed, replicates)
    for method in methods:
        stats, pvals = [], []
        for r, res in enumerate(results):
            val = res[method]
            if isinstance(val, str):
                report.failures.append({"replicate": r, "method": method, "error": val})
                continue
            stats.append(val[0])
            pvals.append(val[1])
        # None rather than nan when every replicate failed, so the report stays valid JSON
        rate = float(np.mean(np.array(pvals) < alpha)) if pvals else None
        ks = ks_distance(stats, lambda x: statdist.chi2_cdf(max(x, 0.0), df)) if stats else None
        report.methods[method] = MethodCalibration(method, df, stats, pvals, rate, ks)
    return report
