"""Fréchet functions, variation summaries and the two-sample variation test."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import statdist
from .errors import DegenerateVariance, EmptySample, InputError
from .shape_core import Shape, geodesic_distance, procrustes_distance_sq


class MetricKind(str, enum.Enum):
    EXTRINSIC = "extrinsic"
    INTRINSIC = "intrinsic"

    def distance_sq(self, a: Shape, b: Shape) -> float:
        if self is MetricKind.EXTRINSIC:
            return procrustes_distance_sq(a, b)
        return geodesic_distance(a, b) ** 2


@dataclass(frozen=True)
class VariationSummary:
    n: int
    variation: float
    s_sq: float

    def __post_init__(self):
        if self.n < 1:
            raise InputError("summary needs n >= 1")
        if self.variation < 0 or self.s_sq < 0:
            raise InputError("variation and s_sq must be nonnegative")


@dataclass(frozen=True)
class TestReport:
    """Outcome of a two-sample test.

    ``distribution`` is ``"chi_squared"`` (with ``df``) or ``"standard_normal"``.
    """

    __test__ = False  # not a pytest class

    name: str
    statistic: float
    distribution: str
    p_value: float
    alpha: float
    reject: bool
    df: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.df is None:
            d.pop("df")
        if not self.extra:
            d.pop("extra")
        return d


def chi_squared_report(name: str, statistic: float, df: int, alpha: float, **extra) -> TestReport:
    p = statdist.chi2_sf(max(statistic, 0.0), df)
    return TestReport(name, float(statistic), "chi_squared", p, alpha, p < alpha, df=df, extra=extra)


def normal_report(name: str, statistic: float, alpha: float, **extra) -> TestReport:
    p = statdist.normal_two_sided_p(statistic)
    return TestReport(name, float(statistic), "standard_normal", p, alpha, p < alpha, extra=extra)


def check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")


def squared_distances(p: Shape, sample: Sequence[Shape], metric: MetricKind) -> np.ndarray:
    if len(sample) == 0:
        raise EmptySample("sample is empty")
    metric = MetricKind(metric)
    return np.array([metric.distance_sq(x, p) for x in sample])


def frechet_function(p: Shape, sample: Sequence[Shape], metric: MetricKind) -> float:
    """Mean squared distance from ``p`` to the sample points."""
    return float(np.mean(squared_distances(p, sample, metric)))


def variation_summary(sample: Sequence[Shape], mean: Shape, metric: MetricKind) -> VariationSummary:
    """Sample variation at a caller-supplied mean, with the 1/n variance of the squared distances."""
    d2 = squared_distances(mean, sample, metric)
    v = float(np.mean(d2))
    s_sq = float(np.mean((d2 - v) ** 2))
    return VariationSummary(n=len(d2), variation=v, s_sq=s_sq)


def variation_test(a: VariationSummary, b: VariationSummary, alpha: float = 0.05) -> TestReport:
    """Studentized difference of sample variations, two-sided normal reference."""
    check_alpha(alpha)
    if a.n < 2 or b.n < 2:
        raise InputError("variation test needs at least two observations per sample")
    se2 = a.s_sq / a.n + b.s_sq / b.n
    if not se2 > 0:
        raise DegenerateVariance("both samples have zero spread of squared distances")
    z = (a.variation - b.variation) / math.sqrt(se2)
    return normal_report("variation", z, alpha)
