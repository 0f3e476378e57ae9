"""
Tests for linear conditional expectation conditions and LP feasibility.
"""

import itertools
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from config.exceptions import CorrelationBoundError, OutOfTheoremScopeError, ParameterDomainError
from families import JointPMF
from lince import (
    LP_FAMILY,
    OUTSIDE,
    FarkasCertificate,
    LinearCESpec,
    build_lp_system,
    build_lp_system_general,
    certificate_margin_of,
    choose_support_bound,
    classify_theta_domain,
    coefficient_relations,
    necessary_conditions,
    phase_one,
    solve_feasibility,
    solve_feasibility_experimental,
    verify_certificate,
    write_certificate_csv,
)
from oracle import affine_residual


def uniform_slopes(n: int, slope: float, intercept: float) -> LinearCESpec:
    matrix = [[0.0 if i == j else slope for j in range(n)] for i in range(n)]
    return LinearCESpec(n=n, slopes=matrix, intercepts=[intercept] * n)


# Specification model

def test_bivariate_spec_layout():
    spec = LinearCESpec.bivariate(a=0.6, b=1.8, c=0.4, d=1.0)
    assert spec.slopes == [[0.0, 0.4], [0.6, 0.0]]
    assert spec.intercepts == [1.0, 1.8]
    assert spec.coefficients() == (0.6, 1.8, 0.4, 1.0)


def test_spec_rejects_bad_shapes():
    with pytest.raises(ValueError):
        LinearCESpec(n=2, slopes=[[1.0, 0.5], [0.5, 0.0]], intercepts=[1.0, 1.0])
    with pytest.raises(ValueError):
        LinearCESpec(n=3, slopes=[[0.0, 0.5], [0.5, 0.0]], intercepts=[1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        uniform_slopes(3, 0.2, 1.0).coefficients()


# Necessary conditions

@pytest.mark.parametrize("coefficients,case,satisfied", [
    ((0.5, 1, 0.5, 1), "correlated", True),
    ((0, 1, 0, 1), "independent", True),
    ((1, 1, 1, 1), "linear_dependence", True),
    ((2, 0.1, 2, 0.1), "no_positive_variance_solution", False),
    ((0, 1, 0.5, 1), "one_sided_zero_slope", False),
    ((-0.5, 1, 0.5, 1), "slope_signs_differ", False),
])
def test_bivariate_necessary_conditions(coefficients, case, satisfied):
    report = necessary_conditions(LinearCESpec.bivariate(*coefficients))
    assert report.case == case
    assert report.satisfied is satisfied


def test_slope_product_reported():
    report = necessary_conditions(LinearCESpec.bivariate(0.5, 1, 0.5, 1))
    assert report.product == pytest.approx(0.25)
    assert report.minors[(0, 1)] == pytest.approx(0.75)


def test_trivariate_minors():
    report = necessary_conditions(uniform_slopes(3, 1 / 3, 1.0))
    assert report.satisfied
    assert report.case == "minors_positive"
    for pair in itertools.combinations(range(3), 2):
        assert report.minors[pair] == pytest.approx(8 / 9)
    assert report.minors[(0, 1, 2)] == pytest.approx(16 / 27)


def test_trivariate_minors_violated():
    report = necessary_conditions(uniform_slopes(3, 0.6, 1.0))
    assert not report.satisfied
    assert report.minors[(0, 1, 2)] < 0


# Theta-domain classification

def test_region_c_is_poisson_gamma():
    report = classify_theta_domain(0.5, 1, 0.5, 1)
    assert report.region == "c"
    assert report.params.theta2 == 0.0 and report.params.theta4 == 0.0
    assert report.delta == pytest.approx(2.0)


def test_region_d_parameters():
    report = classify_theta_domain(0.6, 1.8, 0.4, 1.0)
    assert report.region == "d"
    assert report.delta == pytest.approx(29 / 3)
    p = report.params
    assert (p.theta1, p.theta2, p.theta3, p.theta4) == pytest.approx(
        (0.10345, -0.29655, 0.18621, -0.41379), abs=1e-5
    )
    assert p.violations() == []


def test_region_a():
    report = classify_theta_domain(2, 3, 0.3, 1)
    assert report.region == "a"
    assert report.params.violations() == []


def test_outside_regions():
    assert classify_theta_domain(0.5, 1, 0.5, 2).region == OUTSIDE
    assert classify_theta_domain(0.6, 3.0, 0.4, 1.0).region == OUTSIDE
    assert not classify_theta_domain(0.6, 3.0, 0.4, 1.0).inside


def test_classify_rejects_out_of_domain():
    with pytest.raises(CorrelationBoundError):
        classify_theta_domain(2, 1, 0.5, 1)
    with pytest.raises(ParameterDomainError):
        classify_theta_domain(0, 1, 0.5, 1)


def test_regions_yield_valid_parameters():
    values = np.linspace(0.05, 1.5, 12)
    intercepts = np.linspace(0.2, 3.0, 6)
    for a, c in itertools.product(values, values):
        if a * c >= 1.0:
            continue
        for b, d in itertools.product(intercepts, intercepts):
            report = classify_theta_domain(a, b, c, d)
            assert report.region in {"a", "b", "c", "d", "e", OUTSIDE}
            if report.inside:
                p = report.params
                assert p.violations() == [], (a, b, c, d, report.region)
                assert p.slope_x == pytest.approx(c)
                assert p.slope_y == pytest.approx(a)


# Support bound

@pytest.mark.parametrize("coefficients,expected", [
    ((0.5, 1, 0.5, 1), 9),
    ((0.2, 5, 0.8, 5), 36),
    ((0.05, 1, 0.5, 1), 441),
])
def test_choose_support_bound(coefficients, expected):
    assert choose_support_bound(*coefficients) == expected


def test_support_bound_out_of_scope():
    with pytest.raises(OutOfTheoremScopeError):
        choose_support_bound(1.0, 1, 0.5, 1)


def test_coefficient_relations():
    symmetric = coefficient_relations(0.5, 1, 0.5, 1)
    assert symmetric == {"poisson_gamma": True, "beta_nb": True, "trivariate_nb": True, "theta_family": True}
    region_d = coefficient_relations(0.6, 1.8, 0.4, 1.0)
    assert not region_d["poisson_gamma"]
    assert not region_d["trivariate_nb"]
    assert region_d["theta_family"]


# LP system

def test_lp_system_shape_and_uniform_solution():
    system = build_lp_system(LinearCESpec.bivariate(0, 0.5, 0, 0.5), 1)
    assert system.shape == (5, 4)
    assert np.allclose(system.matrix @ np.full(4, 0.25), system.rhs, atol=1e-15)


def test_lp_system_rows():
    spec = LinearCESpec.bivariate(0.5, 1, 0.5, 1)
    system = build_lp_system(spec, 9)
    assert system.shape == (21, 100)
    # row for i = 0 reads sum_j (b - j) p_0j
    assert np.array_equal(system.matrix[1, :10], 1.0 - np.arange(10))
    assert np.all(system.matrix[1, 10:] == 0)
    assert system.cell(23) == (2, 3)


def test_lp_system_needs_bivariate_spec():
    with pytest.raises(ParameterDomainError):
        build_lp_system(uniform_slopes(3, 0.2, 1.0), 2)


def test_lp_system_needs_positive_bound():
    spec = LinearCESpec.bivariate(0.5, 1, 0.5, 1)
    with pytest.raises(ParameterDomainError, match="Support bound"):
        build_lp_system(spec, 0)
    with pytest.raises(ParameterDomainError, match="Support bound"):
        build_lp_system_general(spec, 0)


def test_general_system_matches_bivariate_rows():
    spec = LinearCESpec.bivariate(0.5, 1, 0.5, 1)
    specific = build_lp_system(spec, 4).matrix
    general = build_lp_system_general(spec, 4).matrix
    assert general.shape == specific.shape
    as_rows = lambda m: sorted(map(tuple, np.round(m, 12)))
    assert as_rows(general) == as_rows(specific)


def test_general_system_shape():
    system = build_lp_system_general(uniform_slopes(3, 0.2, 1.0), 1)
    assert system.shape == (13, 8)
    assert system.cell(5) == (1, 0, 1)


# Feasibility

def test_feasible_spec_gives_pmf_with_linear_ce():
    spec = LinearCESpec.bivariate(0.5, 1, 0.5, 1)
    joint = solve_feasibility(spec, 9)
    assert isinstance(joint, JointPMF)
    assert joint.family == LP_FAMILY
    assert joint.captured_mass == 1.0
    assert joint.probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert joint.metadata["residual"] <= 1e-8
    system = build_lp_system(spec, 9)
    assert np.abs(system.matrix @ joint.probs.reshape(-1) - system.rhs).max() <= 1e-8
    threshold = 1e-6
    bound = joint.metadata["residual"] / threshold + 1e-8
    assert affine_residual(joint, 0, (0.5,), 1.0, mass_threshold=threshold) <= bound
    assert affine_residual(joint, 1, (0.5,), 1.0, mass_threshold=threshold) <= bound


def test_independent_spec_is_feasible():
    joint = solve_feasibility(LinearCESpec.bivariate(0, 1, 0, 1), 3)
    assert isinstance(joint, JointPMF)
    assert joint.metadata["exploratory"] is False


@pytest.mark.parametrize("N", [5, 9, 16])
def test_infeasible_spec_gives_certificate(N):
    spec = LinearCESpec.bivariate(2, 0.1, 2, 0.1)
    cert = solve_feasibility(spec, N)
    assert isinstance(cert, FarkasCertificate)
    assert cert.y0 < 0
    assert cert.y.size == 2 * N + 2
    assert verify_certificate(cert, spec)
    assert certificate_margin_of(cert, spec) > 1e-10


def test_broken_certificates_fail_verification():
    spec = LinearCESpec.bivariate(2, 0.1, 2, 0.1)
    cert = solve_feasibility(spec, 5)
    assert not verify_certificate(FarkasCertificate(y0=-1.0, y=np.zeros(12), N=5), spec)
    assert not verify_certificate(FarkasCertificate(y0=cert.y0, y=-cert.y, N=5), spec)
    assert not verify_certificate(FarkasCertificate(y0=-cert.y0, y=cert.y, N=5), spec)
    assert not verify_certificate(FarkasCertificate(y0=cert.y0, y=cert.y[:-1], N=5), spec)


def test_certificate_csv(tmp_path):
    spec = LinearCESpec.bivariate(2, 0.1, 2, 0.1)
    cert = solve_feasibility(spec, 5)
    path = write_certificate_csv(cert, tmp_path / "certificate.csv")
    assert len(path.read_text().strip().splitlines()) == 1
    values = pd.read_csv(path, header=None).to_numpy()[0]
    assert values.size == 13
    assert np.allclose(values, cert.as_vector(), rtol=1e-15, atol=0)


def test_solve_is_deterministic():
    spec = LinearCESpec.bivariate(0.5, 1, 0.5, 1)
    first = solve_feasibility(spec, 9)
    second = solve_feasibility(spec, 9)
    assert np.array_equal(first.probs, second.probs)


def test_exploratory_trivariate_feasible():
    joint = solve_feasibility_experimental(uniform_slopes(3, 0.0, 1.0), 2)
    assert isinstance(joint, JointPMF)
    assert joint.probs.shape == (3, 3, 3)
    assert joint.metadata["exploratory"] is True


def test_exploratory_trivariate_infeasible():
    spec = LinearCESpec(n=3, slopes=np.zeros((3, 3)).tolist(), intercepts=[5.0, 1.0, 1.0])
    cert = solve_feasibility_experimental(spec, 2)
    assert isinstance(cert, FarkasCertificate)
    assert cert.n == 3
    assert verify_certificate(cert, spec)


def test_phase_one_small_systems():
    feasible = phase_one(np.array([[1.0, 1.0]]), np.array([1.0]))
    assert feasible.feasible
    assert feasible.x.sum() == pytest.approx(1.0)
    matrix = np.array([[1.0, 1.0], [1.0, -1.0]])
    rhs = np.array([1.0, 2.0])
    infeasible = phase_one(matrix, rhs)
    assert not infeasible.feasible
    assert np.all(infeasible.dual @ matrix <= 1e-9)
    assert infeasible.dual @ rhs > 0
    assert infeasible.dual @ rhs == pytest.approx(infeasible.objective)


def test_phase_one_badly_scaled_rows():
    matrix = np.array([[1.0, 1.0, 1.0], [1e4, -2e4, 0.0], [0.0, 1e-3, -1e-3]])
    rhs = np.array([1.0, 0.0, 0.0])
    result = phase_one(matrix, rhs)
    assert result.feasible
    assert result.x == pytest.approx([0.5, 0.25, 0.25], abs=1e-12)
    assert result.residual <= 1e-12


def assert_linear_ce_pmf(outcome, a, b, c, d):
    assert isinstance(outcome, JointPMF), (a, b, c, d)
    assert outcome.metadata["residual"] <= 1e-8
    assert affine_residual(outcome, 1, [a], b) <= 1e-6
    assert affine_residual(outcome, 0, [c], d) <= 1e-6


@pytest.mark.parametrize("a, b, c, d", [
    (0.8, 2.0, 0.8, 2.0),
    (0.8, 2.0, 0.65, 2.0),
    (0.65, 0.1, 0.8, 2.0),
    (0.8, 0.5, 0.65, 0.1),
])
def test_strong_dependence_is_solved_at_the_theorem_bound(a, b, c, d):
    N = choose_support_bound(a, b, c, d)
    assert N == 36
    assert_linear_ce_pmf(solve_feasibility(LinearCESpec.bivariate(a, b, c, d), N), a, b, c, d)


def test_solution_has_no_roundoff_cells():
    joint = solve_feasibility(LinearCESpec.bivariate(0.2, 0.1, 0.2, 1.0), 36)
    cells = joint.probs[joint.probs > 0]
    assert cells.min() >= 5e-10
    assert affine_residual(joint, 1, [0.2], 0.1, mass_threshold=0.0) <= 1e-6
    assert affine_residual(joint, 0, [0.2], 1.0, mass_threshold=0.0) <= 1e-6


@pytest.mark.slow
def test_bounded_support_existence_grid():
    slopes = [0.2, 0.35, 0.5, 0.65, 0.8]
    intercepts = [0.1, 0.5, 1.0, 2.0]
    for a, c in itertools.product(slopes, slopes):
        for b, d in itertools.product(intercepts, intercepts):
            N = choose_support_bound(a, b, c, d)
            assert N <= 36
            outcome = solve_feasibility(LinearCESpec.bivariate(a, b, c, d), N)
            assert_linear_ce_pmf(outcome, a, b, c, d)
