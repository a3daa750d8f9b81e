import math

import numpy as np
import pytest
from scipy import stats

from shapestat.errors import DomainError
from shapestat.statdist import ChiSquared, chi2_cdf, chi2_quantile, chi2_sf, normal_two_sided_p


def poisson_tail(x, k):
    """P(chi^2_{2k} > x) = exp(-x/2) sum_{j<k} (x/2)^j / j!"""
    h = x / 2
    return math.exp(-h) * sum(h**j / math.factorial(j) for j in range(k))


def test_closed_forms():
    for d in (1, 2, 7, 40):
        assert chi2_sf(0, d) == 1.0
    assert chi2_sf(2, 2) == pytest.approx(math.exp(-1), rel=1e-14)
    assert chi2_quantile(0.5, 2) == pytest.approx(2 * math.log(2), rel=1e-12)


@pytest.mark.parametrize("k", range(1, 16))
def test_even_df_matches_poisson_sum(k):
    for x in np.linspace(0.01, 120, 60):
        assert chi2_sf(x, 2 * k) == pytest.approx(poisson_tail(x, k), rel=1e-10, abs=1e-300)


def test_matches_reference_implementation_on_grid():
    rng = np.random.default_rng(3)
    for _ in range(3000):
        df = int(rng.integers(1, 101))
        x = float(rng.uniform(0, 200))
        ref = stats.chi2.sf(x, df)
        assert chi2_sf(x, df) == pytest.approx(ref, rel=1e-10, abs=1e-290)


def test_reference_tail_probabilities():
    assert chi2_sf(43.124, 22) == pytest.approx(0.005, abs=5e-4)
    assert 3.5e-11 <= chi2_sf(95.5476, 22) <= 4.1e-11


@pytest.mark.parametrize("df", [1, 3, 6, 22])
def test_sf_strictly_decreasing(df):
    xs = np.linspace(0.05, 150, 400)
    vals = [chi2_sf(x, df) for x in xs]
    assert all(a > b for a, b in zip(vals, vals[1:]) if b > 0)


def test_cdf_complements_sf():
    for df in (1, 4, 22):
        for x in (0.1, 3.0, 30.0):
            assert chi2_cdf(x, df) + chi2_sf(x, df) == pytest.approx(1.0, abs=1e-14)


def test_quantile_roundtrip():
    rng = np.random.default_rng(4)
    for _ in range(100):
        p = float(rng.uniform(0.001, 0.999))
        df = int(rng.integers(1, 60))
        x = chi2_quantile(p, df)
        assert chi2_sf(x, df) == pytest.approx(1 - p, rel=1e-9)


def test_quantile_against_bisection_oracle():
    lo, hi = 0.0, 200.0
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if chi2_sf(mid, 22) > 0.05 else (lo, mid)
    x = chi2_quantile(0.95, 22)
    assert x == pytest.approx(lo, rel=1e-10)
    assert chi2_sf(x, 22) == pytest.approx(0.05, abs=1e-9)


def test_domain_errors():
    with pytest.raises(DomainError):
        chi2_sf(-1.0, 3)
    with pytest.raises(DomainError):
        chi2_quantile(1.0, 3)
    with pytest.raises(DomainError):
        ChiSquared(0)


def test_normal_two_sided():
    assert normal_two_sided_p(0.0) == 1.0
    assert normal_two_sided_p(0.9461) == pytest.approx(0.3441, abs=5e-4)
    assert normal_two_sided_p(0.923) == pytest.approx(0.356, abs=1e-3)
    for z in np.linspace(-8, 8, 81):
        assert normal_two_sided_p(z) == normal_two_sided_p(-z)
        assert normal_two_sided_p(z) == pytest.approx(2 * stats.norm.sf(abs(z)), rel=1e-10)
