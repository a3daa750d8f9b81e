"""Chi-squared and standard normal tail probabilities.

Self-contained so that every reported p-value can be traced to a few lines
of arithmetic: the regularized incomplete gamma function uses the power
series below ``x < a + 1`` and a modified-Lentz continued fraction above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NumericalFailure

_EPS = 1e-14
_TINY = 1e-300
_MAX_ITER = 10_000


@dataclass(frozen=True)
class ChiSquared:
    df: int

    def __post_init__(self):
        if int(self.df) != self.df or self.df < 1:
            raise DomainError(f"degrees of freedom must be a positive integer, got {self.df}")

    def sf(self, x: float) -> float:
        return chi2_sf(x, self.df)

    def quantile(self, p: float) -> float:
        return chi2_quantile(p, self.df)


def _gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by its power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise NumericalFailure(f"incomplete gamma series did not converge (a={a}, x={x})")


def _gamma_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
    raise NumericalFailure(f"incomplete gamma continued fraction did not converge (a={a}, x={x})")


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x)."""
    if a <= 0:
        raise DomainError("shape parameter must be positive")
    if x < 0 or math.isnan(x):
        raise DomainError(f"x must be nonnegative, got {x}")
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_cf(a, x))


def chi2_sf(x: float, df: int) -> float:
    """P(chi^2_df > x)."""
    ChiSquared(df)
    if x < 0 or math.isnan(x):
        raise DomainError(f"chi-squared argument must be nonnegative, got {x}")
    return gamma_q(df / 2.0, x / 2.0)


def chi2_cdf(x: float, df: int) -> float:
    ChiSquared(df)
    if x <= 0:
        return 0.0
    a = df / 2.0
    if x / 2.0 < a + 1.0:
        return min(1.0, _gamma_series(a, x / 2.0))
    return 1.0 - chi2_sf(x, df)


def chi2_quantile(p: float, df: int) -> float:
    """The x with P(chi^2_df <= x) = p."""
    ChiSquared(df)
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p}")
    target = 1.0 - p
    # bracket, bisect, then polish with a few Newton steps
    lo, hi = 0.0, max(1.0, 2.0 * df)
    while chi2_sf(hi, df) > target:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if chi2_sf(mid, df) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    x = 0.5 * (lo + hi)
    a = df / 2.0
    for _ in range(3):
        dens = math.exp((a - 1.0) * math.log(x / 2.0) - x / 2.0 - math.lgamma(a)) / 2.0
        if dens <= 0:
            break
        step = (chi2_sf(x, df) - target) / dens
        if not math.isfinite(step) or abs(step) > (hi - lo) + 1e-12 * x:
            break
        x += step
    return x


def normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def normal_two_sided_p(z: float) -> float:
    """2(1 - Phi(|z|)), evaluated through erfc to keep the tail accurate."""
    return min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))

