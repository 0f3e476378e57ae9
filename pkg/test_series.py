"""
Tests for truncated power-series arithmetic and pgf/pmf conversion.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.special import gammaln
from scipy.stats import nbinom, poisson

sys.path.insert(0, str(Path(__file__).parent))

from config.exceptions import InvalidPGFError, OrderMismatchError, SingularConstantTermError
from series import (
    BivariateSeries,
    TruncatedSeries,
    bivariate_pgf_to_pmf,
    bivariate_real_power,
    pgf_to_pmf,
    series_mul,
    series_real_power,
)


def poisson_series(lam: float, K: int) -> TruncatedSeries:
    return TruncatedSeries(poisson.pmf(np.arange(K + 1), lam))


def theta_base(A: float, B: float, C: float, K: int) -> BivariateSeries:
    # 1 + A(1-u) + B(1-v) + C(1-u)(1-v), rows are powers of u
    return BivariateSeries.from_polynomial(
        [[1 + A + B + C, -B - C], [-A - C, C]], K
    )


def expansion_oracle(A: float, B: float, C: float, delta: float, K: int) -> np.ndarray:
    """
    base^-delta = s^-delta sum_m (delta)_m / m! g^m with base = s (1 - g) and
    g free of a constant term, so orders above x + y never contribute.
    """
    s = 1 + A + B + C
    g = np.zeros((K + 1, K + 1))
    g[1, 0] = (A + C) / s
    g[0, 1] = (B + C) / s
    g[1, 1] = -C / s
    out = np.zeros((K + 1, K + 1))
    power = np.zeros((K + 1, K + 1))
    power[0, 0] = 1.0
    for m in range(2 * K + 1):
        weight = np.exp(gammaln(delta + m) - gammaln(delta) - gammaln(m + 1))
        out += weight * power
        full = np.zeros((2 * K + 2, 2 * K + 2))
        for i, j in zip(*np.nonzero(g)):
            full[i:i + K + 1, j:j + K + 1] += g[i, j] * power
        power = full[:K + 1, :K + 1]
    return out * s ** (-delta)


def test_series_mul_polynomial_square():
    a = TruncatedSeries.from_polynomial([1, 1], 4)
    assert np.allclose(series_mul(a, a).coeffs, [1, 2, 1, 0, 0])


def test_series_mul_identity():
    a = poisson_series(2.0, 10)
    assert np.array_equal(series_mul(a, TruncatedSeries.one(10)).coeffs, a.coeffs)


def test_series_mul_poisson_convolution():
    product = series_mul(poisson_series(1.0, 30), poisson_series(2.0, 30))
    assert np.max(np.abs(product.coeffs - poisson.pmf(np.arange(31), 3.0))) < 1e-12


def test_series_mul_order_mismatch():
    with pytest.raises(OrderMismatchError):
        series_mul(TruncatedSeries.one(3), TruncatedSeries.one(4))


def test_real_power_geometric_series():
    base = TruncatedSeries.from_polynomial([1, -1], 5)
    assert np.allclose(series_real_power(base, -1).coeffs, np.ones(6), atol=1e-15)


def test_real_power_geometric_pmf():
    base = TruncatedSeries.from_polynomial([3, -2], 4)
    expected = (1 / 3) * (2 / 3) ** np.arange(5)
    assert np.allclose(series_real_power(base, -1).coeffs, expected, atol=1e-15)


def test_real_power_integer_exponent():
    base = TruncatedSeries.from_polynomial([1, 1], 4)
    assert np.allclose(series_real_power(base, 2).coeffs, [1, 2, 1, 0, 0], atol=1e-15)


def test_real_power_exponent_addition():
    base = TruncatedSeries.from_polynomial([2.0, -0.7, 0.1], 40)
    lhs = series_real_power(base, -1.3 + 0.45)
    rhs = series_mul(series_real_power(base, -1.3), series_real_power(base, 0.45))
    assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) < 1e-10


def test_real_power_singular_constant_term():
    with pytest.raises(SingularConstantTermError):
        series_real_power(TruncatedSeries.from_polynomial([0, 1], 3), 0.5)
    with pytest.raises(SingularConstantTermError):
        series_real_power(TruncatedSeries.from_polynomial([-1, 1], 3), 2)


def test_bivariate_constant_base():
    out = bivariate_real_power(BivariateSeries.from_polynomial([[1.0]], 6), -2.5)
    expected = np.zeros((7, 7))
    expected[0, 0] = 1.0
    assert np.allclose(out.coeffs, expected, atol=1e-15)


def test_bivariate_separable_geometric():
    # (1 - u/2)(1 - v/2) to the power -1
    base = BivariateSeries.from_polynomial([[1, -0.5], [-0.5, 0.25]], 8)
    out = bivariate_real_power(base, -1)
    x, y = np.indices((9, 9))
    assert np.max(np.abs(out.coeffs - 0.5 ** (x + y))) < 1e-13


@pytest.mark.parametrize("method", ["recurrence", "binomial"])
def test_bivariate_against_expansion_oracle(method):
    K = 8
    out = bivariate_real_power(theta_base(1.0, 1.0, 0.5, K), -2.0, method=method)
    assert np.max(np.abs(out.coeffs - expansion_oracle(1.0, 1.0, 0.5, 2.0, K))) < 1e-8


def test_bivariate_methods_agree():
    base = theta_base(0.8, 1.7, -0.3, 40)
    first = bivariate_real_power(base, -3.2, method="recurrence")
    second = bivariate_real_power(base, -3.2, method="binomial")
    assert np.max(np.abs(first.coeffs - second.coeffs)) < 1e-12


def test_bivariate_reduces_to_univariate_on_u_axis():
    K = 30
    base = theta_base(1.5, 0.0, 0.0, K)
    out = bivariate_real_power(base, -2.3)
    univariate = series_real_power(TruncatedSeries.from_polynomial([2.5, -1.5], K), -2.3)
    assert np.max(np.abs(out.u_axis().coeffs - univariate.coeffs)) <= 1e-13
    assert np.max(np.abs(out.coeffs[:, 1:])) <= 1e-13


def test_bivariate_marginal_is_negative_binomial():
    # v = 1 leaves (1 + A(1-u))^-delta
    K = 60
    A, B, C, delta = 1.0, 1.0, 0.5, 2.0
    out = bivariate_real_power(theta_base(A, B, C, K), -delta)
    marginal = out.coeffs.sum(axis=1)[:20]
    assert np.max(np.abs(marginal - nbinom.pmf(np.arange(20), delta, 1 / (1 + A)))) < 1e-10


def test_bivariate_unknown_method():
    with pytest.raises(ValueError):
        bivariate_real_power(theta_base(1, 1, 0, 4), -1, method="fft")


def test_pgf_to_pmf_poisson():
    pmf = pgf_to_pmf(poisson_series(1.0, 10))
    assert pmf.probs[0] == pytest.approx(np.exp(-1.0), abs=1e-15)
    assert pmf.captured_mass == pytest.approx(poisson.cdf(10, 1.0), abs=1e-14)
    assert pmf.clamped == 0


def test_pgf_to_pmf_point_mass():
    pmf = pgf_to_pmf(TruncatedSeries.one(5))
    assert np.array_equal(pmf.probs, [1, 0, 0, 0, 0, 0])
    assert pmf.captured_mass == 1.0


def test_pgf_to_pmf_geometric():
    # NB(1, 0.5) pgf is 0.5 / (1 - 0.5 u)
    series = series_real_power(TruncatedSeries.from_polynomial([2, -1], 20), -1)
    pmf = pgf_to_pmf(series)
    assert np.allclose(pmf.probs, 0.5 ** (np.arange(21) + 1), atol=1e-15)


def test_pgf_to_pmf_clamps_noise_and_rejects_negatives():
    noisy = pgf_to_pmf(TruncatedSeries([0.5, -1e-14, 0.5]))
    assert noisy.probs[1] == 0.0
    assert noisy.clamped == 1
    with pytest.raises(InvalidPGFError):
        pgf_to_pmf(TruncatedSeries([0.5, -1e-6, 0.5]))
    with pytest.raises(InvalidPGFError):
        pgf_to_pmf(TruncatedSeries([0.7, 0.7]))


def test_bivariate_pgf_to_pmf_mass():
    out = bivariate_real_power(theta_base(1.0, 1.0, 0.5, 60), -2.0)
    pmf = bivariate_pgf_to_pmf(out)
    assert pmf.probs.shape == (61, 61)
    assert 1 - 1e-8 < pmf.captured_mass <= 1 + 1e-12


def test_series_rejects_non_finite():
    with pytest.raises(ValueError):
        TruncatedSeries([1.0, np.nan])
    with pytest.raises(ValueError):
        BivariateSeries(np.ones((2, 3)))
