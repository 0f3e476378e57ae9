"""
Tests for the count-distribution catalogue and its samplers.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.special import betaln

sys.path.insert(0, str(Path(__file__).parent))

from config.exceptions import MomentDivergenceError, ParameterDomainError
from distributions import (
    BetaNB,
    Degenerate,
    Geometric,
    NegBinomial,
    Poisson,
    ThetaRatio,
    compound_sum,
    distribution_from_dict,
    draw,
    make_distribution,
    mean_of,
    natural_bound,
    pgf_series_of,
    pmf_eval,
    pmf_vector,
    theta_ratio_components,
    variance_of,
)
from series import pgf_to_pmf


def catalogue_grid():
    """Twenty laws spanning every catalogue member."""
    return [
        make_distribution("poisson", lam=0.3),
        make_distribution("poisson", lam=1.0),
        make_distribution("poisson", lam=4.5),
        make_distribution("poisson", lam=9.0),
        make_distribution("negbinomial", r=0.5, p=0.4),
        make_distribution("negbinomial", r=2.0, p=0.5),
        make_distribution("negbinomial", r=3.7, p=0.8),
        make_distribution("negbinomial", r=1.0, p=0.25),
        make_distribution("geometric", p=0.5),
        make_distribution("geometric", p=0.2),
        make_distribution("bernoulli", p=0.3),
        make_distribution("bernoulli", p=1.0),
        make_distribution("theta_ratio", theta_num=0.0, theta_den=2.0),
        make_distribution("theta_ratio", theta_num=0.4, theta_den=1.5),
        make_distribution("theta_ratio", theta_num=-0.3, theta_den=0.5),
        make_distribution("theta_ratio", theta_num=-0.9, theta_den=0.1),
        make_distribution("beta_nb", r=2.0, alpha1=2.0, alpha2=1.0),
        make_distribution("beta_nb", r=1.5, alpha1=5.0, alpha2=2.0),
        make_distribution("degenerate", k=0),
        make_distribution("degenerate", k=7),
    ]


@pytest.mark.parametrize("law", catalogue_grid(), ids=lambda law: law.describe())
def test_pgf_round_trip(law):
    pmf = pgf_to_pmf(pgf_series_of(law, 50))
    assert np.max(np.abs(pmf.probs - pmf_vector(law, 50))) <= 1e-12


def test_pmf_eval_examples():
    assert pmf_eval(Poisson(lam=1.0), 0) == pytest.approx(math.exp(-1.0), abs=1e-15)
    assert pmf_eval(NegBinomial(r=2, p=0.5), 1) == pytest.approx(0.25, abs=1e-15)
    assert pmf_eval(BetaNB(r=2, alpha1=2, alpha2=1), 0) == pytest.approx(0.5, abs=1e-14)
    assert pmf_eval(Poisson(lam=1.0), -1) == 0.0
    assert pmf_eval(Degenerate(k=2), 3) == 0.0


def test_pgf_series_examples():
    assert np.allclose(pgf_series_of(make_distribution("bernoulli", p=0.3), 3).coeffs, [0.7, 0.3, 0, 0])
    geometric = pgf_series_of(ThetaRatio(theta_num=0.0, theta_den=2.0), 2).coeffs
    assert np.allclose(geometric, [1 / 3, 2 / 9, 4 / 27], atol=1e-15)
    assert np.array_equal(pgf_series_of(Degenerate(k=2), 4).coeffs, [0, 0, 1, 0, 0])


def test_mean_examples():
    assert mean_of(Poisson(lam=2.5)) == 2.5
    assert mean_of(ThetaRatio(theta_num=-0.3, theta_den=0.5)) == pytest.approx(0.8)
    assert mean_of(NegBinomial(r=3, p=0.25)) == pytest.approx(9.0)
    assert mean_of(Geometric(p=0.5)) == pytest.approx(1.0)


LIGHT_TAILED = [
    law for law in catalogue_grid() if not isinstance(law, (Degenerate, BetaNB))
] + [BetaNB(r=1.0, alpha1=12.0, alpha2=2.0)]


@pytest.mark.parametrize("law", LIGHT_TAILED, ids=lambda law: law.describe())
def test_moments_match_pmf(law):
    K = 2000
    k = np.arange(K + 1)
    pmf = pmf_vector(law, K)
    mean = mean_of(law)
    assert float(pmf @ k) == pytest.approx(mean, rel=1e-8, abs=1e-12)
    variance = variance_of(law)
    assert float(pmf @ (k - mean) ** 2) == pytest.approx(variance, rel=1e-6, abs=1e-12)


def test_beta_nb_moments_diverge():
    with pytest.raises(MomentDivergenceError):
        mean_of(BetaNB(r=1, alpha1=1.0, alpha2=1))
    with pytest.raises(MomentDivergenceError):
        variance_of(BetaNB(r=1, alpha1=2.0, alpha2=1))


def test_beta_nb_normalized():
    law = BetaNB(r=1.5, alpha1=5.0, alpha2=2.0)
    assert pmf_vector(law, 5000).sum() == pytest.approx(1.0, abs=1e-10)
    k = 3
    expected = math.exp(
        math.lgamma(k + 1.5) - math.lgamma(1.5) - math.lgamma(k + 1)
        + betaln(5.0 + 1.5, 2.0 + k) - betaln(5.0, 2.0)
    )
    assert pmf_eval(law, k) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("law", [law for law in catalogue_grid() if not isinstance(law, BetaNB)],
                         ids=lambda law: law.describe())
def test_natural_bound_captures_mass(law):
    assert pmf_vector(law, natural_bound(law)).sum() >= 1 - 1e-8


def test_theta_ratio_with_zero_numerator_is_geometric():
    theta = ThetaRatio(theta_num=0.0, theta_den=1.7)
    geometric = Geometric(p=1 / 2.7)
    assert np.allclose(pmf_vector(theta, 30), pmf_vector(geometric, 30), rtol=1e-13, atol=0)


def test_pgf_series_total_is_captured_mass():
    law = NegBinomial(r=2.0, p=0.3)
    series = pgf_series_of(law, 40)
    assert series.total() == pytest.approx(pgf_to_pmf(series).captured_mass, abs=1e-15)
    assert series.evaluate(1.0) == pytest.approx(series.total(), abs=1e-14)


def test_theta_ratio_components():
    zero_inflated = theta_ratio_components(ThetaRatio(theta_num=0.4, theta_den=1.6))
    assert zero_inflated.kind == "zero_inflated"
    assert zero_inflated.weight == pytest.approx(0.75)
    assert zero_inflated.geometric_p == pytest.approx(1 / 2.6)
    convolution = theta_ratio_components(ThetaRatio(theta_num=-0.3, theta_den=0.5))
    assert convolution.kind == "bernoulli_convolution"
    assert convolution.weight == pytest.approx(0.3)
    assert theta_ratio_components(ThetaRatio(theta_num=0.0, theta_den=1.0)).kind == "geometric"


def test_theta_ratio_requires_ordered_parameters():
    with pytest.raises(ParameterDomainError):
        make_distribution("theta_ratio", theta_num=0.5, theta_den=0.2)
    with pytest.raises(ParameterDomainError):
        make_distribution("theta_ratio", theta_num=-1.0, theta_den=0.2)


def test_invalid_parameters():
    with pytest.raises(ParameterDomainError):
        make_distribution("poisson", lam=-1.0)
    with pytest.raises(ParameterDomainError):
        make_distribution("negbinomial", r=1.0, p=1.0)
    with pytest.raises(ParameterDomainError):
        make_distribution("zipf", s=2.0)
    with pytest.raises(ParameterDomainError):
        distribution_from_dict({"lambda": 2.0})


def test_distribution_from_dict_accepts_alias():
    law = distribution_from_dict({"kind": "poisson", "lambda": 2.0})
    assert isinstance(law, Poisson) and law.lam == 2.0


@pytest.mark.parametrize("law", catalogue_grid(), ids=lambda law: law.describe())
def test_draw_matches_pmf(law):
    rng = np.random.default_rng(11)
    samples = draw(law, 200_000, rng)
    bound = 15
    empirical = np.bincount(np.clip(samples, 0, bound + 1), minlength=bound + 2)[:bound + 1] / samples.size
    assert 0.5 * np.abs(empirical - pmf_vector(law, bound)).sum() < 0.01


@pytest.mark.parametrize("law", [
    make_distribution("bernoulli", p=0.3),
    make_distribution("poisson", lam=0.7),
    make_distribution("negbinomial", r=1.5, p=0.6),
    make_distribution("theta_ratio", theta_num=0.4, theta_den=1.5),
    make_distribution("theta_ratio", theta_num=-0.3, theta_den=0.5),
    make_distribution("degenerate", k=2),
    make_distribution("beta_nb", r=1.0, alpha1=5.0, alpha2=2.0),
], ids=lambda law: law.describe())
def test_compound_sum_mean(law):
    rng = np.random.default_rng(5)
    counts = np.full(100_000, 4)
    counts[::2] = 0
    total = compound_sum(law, counts, rng)
    assert np.all(total[::2] == 0)
    odd = total[1::2]
    assert odd.mean() == pytest.approx(4 * mean_of(law), abs=6 * math.sqrt(4 * variance_of(law) / odd.size) + 1e-12)
