"""
Tests for config parsing, report emission and the command-line entry point.
"""

import io
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cli import (
    EXIT_ERROR,
    EXIT_NEGATIVE,
    EXIT_OK,
    emit_report,
    format_value,
    parse_config_text,
    parse_model_config,
)
from cli.commands import check_compat, classify, solve_lp
from compat import CARSpec, LinearPoissonSpec, RandomCoeffSpec
from config.exceptions import (
    ConfigSchemaError,
    IncompatibleParametersError,
    ParameterDomainError,
)
from distributions import Bernoulli, Geometric, Poisson
from families import FamilyDescriptor, FamilyType
from lince import FarkasCertificate, LinearCESpec
from main import main


COMPATIBLE_CAR = """
# trivariate Poisson conditionals, rates (1, 2, 3)
spec=car n=2
thin_12=bernoulli:0.25 thin_21=bernoulli:0.3333333333333333
innov_1=poisson:2 innov_2=poisson:3
"""


def write_config(tmp_path: Path, text: str, name: str = "model.cfg") -> Path:
    path = tmp_path / name
    path.write_text(text)
    return path


def run(capsys, *argv) -> tuple:
    code = main([str(arg) for arg in argv])
    return code, capsys.readouterr().out


def report_lines(text: str) -> dict:
    out = {}
    for line in text.strip().splitlines():
        key, _, value = line.partition(": ")
        out[key] = value
    return out


# Config parsing

def test_parse_family_config(tmp_path):
    path = write_config(tmp_path, "family=poisson_gamma alpha=1 beta=1 lambdas=1,1\n")
    descriptor = parse_model_config(path)
    assert isinstance(descriptor, FamilyDescriptor)
    assert descriptor.family is FamilyType.POISSON_GAMMA
    assert descriptor.params == {"alpha": 1.0, "beta": 1.0, "lambdas": [1.0, 1.0]}


def test_parse_theta_order_violation():
    text = "family=theta delta=2 theta1=0.2 theta2=0.5 theta3=0.75 theta4=0.5"
    with pytest.raises(IncompatibleParametersError, match="theta2 < theta1"):
        parse_config_text(text, "theta.cfg")
    with pytest.raises(IncompatibleParametersError, match=r"<config>:1: theta2 < theta1"):
        parse_config_text("family=theta theta2=0.5 theta1=0.2")
    with pytest.raises(ParameterDomainError):
        parse_config_text("family=theta theta2=0.1 theta1=0.2")


def test_parse_linear_ce():
    spec = parse_config_text("spec=linear_ce n=2 a=0.5 b=1 c=0.5 d=1")
    assert isinstance(spec, LinearCESpec)
    assert spec.coefficients() == (0.5, 1.0, 0.5, 1.0)


def test_parse_linear_ce_matrix_form():
    spec = parse_config_text(
        "spec=linear_ce n=3 slopes=0,0.3,0.3;0.3,0,0.3;0.3,0.3,0 intercepts=1,1,1"
    )
    assert spec.n == 3
    assert np.allclose(spec.matrix(), [[0, 0.3, 0.3], [0.3, 0, 0.3], [0.3, 0.3, 0]])


def test_parse_car_and_random_coeff():
    car = parse_config_text(COMPATIBLE_CAR)
    assert isinstance(car, CARSpec)
    assert car.law(0, 1) == Bernoulli(p=0.25)
    assert car.innovation[1] == Poisson(lam=3.0)
    coeff = parse_config_text(
        "spec=random_coeff n=2 beta_12=2,3 beta_21=2,4 "
        "innov_1=negbinomial:4,0.5 innov_2=negbinomial:3,0.5"
    )
    assert isinstance(coeff, RandomCoeffSpec)
    assert coeff.beta_params[0][1] == (2.0, 3.0)
    assert coeff.beta_params[1][0] == (2.0, 4.0)


def test_parse_linear_poisson_and_independent():
    spec = parse_config_text("spec=linear_poisson a=0.5 b=1 c=0.5 d=1")
    assert spec == LinearPoissonSpec(a=0.5, b=1.0, c=0.5, d=1.0)
    descriptor = parse_config_text("family=independent law_1=poisson:2 law_2=geometric:0.5")
    assert descriptor.params["laws"] == [Poisson(lam=2.0), Geometric(p=0.5)]


@pytest.mark.parametrize("text, message", [
    ("", "empty"),
    ("# only a comment\n", "empty"),
    ("family=poisson_gamma\nalpha 1", ":2: expected key=value"),
    ("family=zeta a=1", "unknown family"),
    ("family=trivariate_poisson lambda0=1 lambda0=2", "duplicate key"),
    ("family=theta spec=car", "exactly one"),
    ("alpha=1", "exactly one"),
    ("spec=car n=2 thin_11=bernoulli:0.5", "diagonal"),
    ("spec=car n=2 thin_12=bernoulli:0.5 thin_21=zipf:2 innov_1=poisson:1 innov_2=poisson:1", "unknown law"),
    ("spec=car n=2 thin_12=bernoulli:0.5 thin_21=poisson:1,2 innov_1=poisson:1 innov_2=poisson:1", "takes 1"),
    ("spec=car n=2 thin_12=bernoulli:0.5 thin_21=bernoulli:0.5 innov_1=poisson:1", "innov_2"),
    ("spec=linear_poisson a=0.5 b=1 c=0.5 d=1 e=2", "unexpected key"),
    ("spec=linear_ce n=one", "must be a number"),
    ("spec=linear_ce n=1 a=0 b=1 c=0 d=1", "at least 2"),
    ("spec=copula n=2", "unknown spec"),
    ("spec=random_coeff n=2 beta_12=2 beta_21=2,4 innov_1=poisson:1 innov_2=poisson:1", "two Beta"),
    ("family=trivariate_poisson law_1=poisson:1", "independent family"),
])
def test_schema_violations(text, message):
    with pytest.raises(ConfigSchemaError, match=message):
        parse_config_text(text)


def test_parameter_violation_is_line_anchored():
    with pytest.raises(ConfigSchemaError, match=r"model\.cfg:1"):
        parse_config_text("spec=linear_poisson a=-1 b=1 c=0 d=1", "model.cfg")


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigSchemaError, match="Cannot read"):
        parse_model_config(tmp_path / "absent.cfg")


# Reports

def test_format_value():
    assert format_value(True) == "true"
    assert format_value(0.1) == "0.1"
    assert format_value([1, 2.5]) == "1,2.5"
    assert format_value(None) == "none"
    assert format_value(np.float64(1 / 3)) == "0.333333333333"


def test_compatible_verdict_report():
    stream = io.StringIO()
    code = emit_report(check_compat(parse_config_text(COMPATIBLE_CAR)), stream=stream)
    lines = report_lines(stream.getvalue())
    assert code == EXIT_OK
    assert lines["result"] == "compatible"
    assert lines["solution_family"].startswith("trivariate_poisson(")


def test_incompatible_verdict_report():
    stream = io.StringIO()
    verdict = check_compat(parse_config_text("spec=linear_poisson a=0.5 b=1 c=0.5 d=1"))
    assert emit_report(verdict, stream=stream) == EXIT_NEGATIVE
    assert report_lines(stream.getvalue())["result"] == "incompatible"


def test_certificate_report_prints_path(tmp_path):
    certificate = solve_lp(parse_config_text("spec=linear_ce n=2 a=2 b=0.1 c=2 d=0.1"), trunc=5)
    assert isinstance(certificate, FarkasCertificate)
    stream = io.StringIO()
    code = emit_report(certificate, out_dir=tmp_path / "out", stream=stream)
    lines = report_lines(stream.getvalue())
    assert code == EXIT_NEGATIVE
    assert lines["result"] == "infeasible"
    assert Path(lines["certificate_path"]) == tmp_path / "out" / "certificate.csv"
    assert Path(lines["certificate_path"]).exists()


def test_classify_report():
    result = classify(parse_config_text("spec=linear_ce n=2 a=0.5 b=1 c=0.5 d=1"))
    stream = io.StringIO()
    assert emit_report(result, stream=stream) == EXIT_OK
    lines = report_lines(stream.getvalue())
    assert lines["result"] == "necessary_conditions_hold"
    assert lines["slope_product"] == "0.25"
    assert "theta_region" in lines


def test_csv_report(tmp_path):
    result = classify(parse_config_text("spec=linear_ce n=2 a=0.5 b=1 c=0.5 d=1"))
    emit_report(result, fmt="csv", out_dir=tmp_path, stream=io.StringIO())
    frame = pd.read_csv(tmp_path / "report.csv", dtype=str)
    assert list(frame.columns) == ["key", "value"]
    assert frame["key"].iloc[0] == "result"


def test_report_rejects_unknown_inputs():
    with pytest.raises(ValueError):
        emit_report(LinearPoissonSpec(a=0, b=1, c=0, d=1), fmt="json")
    with pytest.raises(TypeError):
        emit_report(LinearPoissonSpec(a=0, b=1, c=0, d=1), stream=io.StringIO())


# Entry point

def test_main_build_writes_pmf(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, "family=trivariate_poisson lambda0=1 lambda1=2 lambda2=3\n")
    code, out = run(capsys, "build", "--config", config, "--trunc", 20, "--out", tmp_path / "out")
    lines = report_lines(out)
    assert code == EXIT_OK
    assert lines["result"] == "built"
    assert lines["family"] == "trivariate_poisson"
    assert (tmp_path / "out" / "joint_pmf.csv").exists()


def test_main_solve_lp_infeasible(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, "spec=linear_ce n=2 a=2 b=0.1 c=2 d=0.1\n")
    code, out = run(capsys, "solve-lp", "--config", config, "--trunc", 5, "--out", tmp_path / "out")
    assert code == EXIT_NEGATIVE
    assert "certificate_path" in report_lines(out)


def test_main_divergence_is_an_error(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, "spec=linear_poisson a=1.2 b=1 c=1.2 d=1\n")
    code, out = run(capsys, "gibbs", "--config", config, "--sweeps", 200, "--chains", 5, "--burnin", 0)
    lines = report_lines(out)
    assert code == EXIT_ERROR
    assert lines["result"] == "error"
    assert lines["error_type"] == "DivergenceDetectedError"


def test_main_wrong_config_kind(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, "spec=linear_poisson a=0.5 b=1 c=0.5 d=1\n")
    code, out = run(capsys, "build", "--config", config)
    assert code == EXIT_ERROR
    assert report_lines(out)["error_type"] == "ConfigSchemaError"


def test_main_sample_is_reproducible(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, "family=multinomial_mix size=10 p1=0.2 p2=0.3 p3=0.5\n")
    for name in ("first", "second"):
        code, _ = run(
            capsys, "sample", "--config", config, "--count", 500, "--seed", 9,
            "--out", tmp_path / name, "--format", "csv",
        )
        assert code == EXIT_OK
    first = (tmp_path / "first" / "samples.csv").read_bytes()
    assert first == (tmp_path / "second" / "samples.csv").read_bytes()


def test_main_gibbs_writes_diagnostic(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, COMPATIBLE_CAR)
    code, out = run(
        capsys, "gibbs", "--config", config, "--sweeps", 200, "--chains", 200,
        "--min-visits", 1000, "--seed", 3, "--out", tmp_path / "out",
    )
    lines = report_lines(out)
    assert code == EXIT_OK
    assert lines["result"] == "diagnosed"
    assert lines["draws"] == "40000"
    frame = pd.read_csv(tmp_path / "out" / "gibbs_diagnostic.csv")
    assert frame["visits"].min() >= 1000


@pytest.mark.parametrize("argv, error_type", [
    (("oracle", "--target", 5), "ParameterDomainError"),
    (("build", "--trunc", 0), "ParameterDomainError"),
])
def test_main_bad_arguments_are_errors(tmp_path, monkeypatch, capsys, argv, error_type):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, "family=trivariate_poisson lambda0=1 lambda1=2 lambda2=3\n")
    command, *rest = argv
    code, out = run(capsys, command, "--config", config, *rest)
    lines = report_lines(out)
    assert code == EXIT_ERROR
    assert lines["result"] == "error"
    assert lines["error_type"] == error_type


def test_main_solve_lp_zero_bound_is_an_error(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, "spec=linear_ce n=2 a=0.5 b=1 c=0.5 d=1\n")
    code, out = run(capsys, "solve-lp", "--config", config, "--trunc", 0)
    assert code == EXIT_ERROR
    assert "Support bound must be positive" in report_lines(out)["error"]


def test_certificate_defaults_to_working_directory(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    certificate = solve_lp(parse_config_text("spec=linear_ce n=2 a=2 b=0.1 c=2 d=0.1"), trunc=5)
    stream = io.StringIO()
    assert emit_report(certificate, stream=stream) == EXIT_NEGATIVE
    path = Path(report_lines(stream.getvalue())["certificate_path"])
    assert path == tmp_path / "certificate.csv"
    assert path.exists()


def test_main_solve_lp_without_out_prints_certificate_path(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, "spec=linear_ce n=2 a=2 b=0.1 c=2 d=0.1\n")
    code, out = run(capsys, "solve-lp", "--config", config, "--trunc", 5)
    assert code == EXIT_NEGATIVE
    assert Path(report_lines(out)["certificate_path"]).exists()


def test_main_gibbs_rejects_last_updated_target(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    config = write_config(tmp_path, COMPATIBLE_CAR)
    code, out = run(capsys, "gibbs", "--config", config, "--sweeps", 10, "--chains", 5, "--target", 1)
    lines = report_lines(out)
    assert code == EXIT_ERROR
    assert lines["error_type"] == "ParameterDomainError"
    assert "updated last" in lines["error"]
