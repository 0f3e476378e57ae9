"""
Deterministic reports and artifacts for command results.

Exit codes: 0 compatible / feasible / built, 1 incompatible / infeasible,
2 error (set by the caller).
"""

from pathlib import Path
from typing import Any, Callable, List, Optional, TextIO, Tuple, Union
import logging
import sys

import numpy as np
import pandas as pd

from compat import CompatVerdict
from families import JointPMF, write_joint_pmf_csv
from lince import LP_FAMILY, FarkasCertificate, write_certificate_csv
from oracle import write_ce_table_csv
from simulate import write_samples_csv
from .models import ClassifyResult, GibbsResult, OracleResult, SampleBatch


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

Line = Tuple[str, Any]
Artifact = Tuple[str, str, Callable[[Path], Path]]


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return ",".join(format_value(v) for v in value)
    if value is None:
        return "none"
    return str(value)


def _verdict(result: CompatVerdict):
    lines: List[Line] = [
        ("result", "compatible" if result.compatible else "incompatible"),
        ("reason", result.reason),
        ("violation", result.violation),
        ("solution_family", result.solution_family.describe() if result.solution_family else None),
    ]
    lines += [(f"detail.{key}", result.details[key]) for key in sorted(result.details)]
    return lines, [], EXIT_OK if result.compatible else EXIT_NEGATIVE


def _classify(result: ClassifyResult):
    report = result.conditions
    lines: List[Line] = [
        ("result", "necessary_conditions_hold" if report.satisfied else "necessary_conditions_fail"),
        ("case", report.case),
        ("slope_product", report.product),
    ]
    lines += [(f"minor.{'_'.join(str(i + 1) for i in key)}", value) for key, value in sorted(report.minors.items())]
    if result.theta_domain is not None:
        lines.append(("theta_region", result.theta_domain.region))
        if result.theta_domain.params is not None:
            lines += [(f"theta.{k}", v) for k, v in result.theta_domain.params.model_dump().items()]
    lines += [(f"relation.{k}", v) for k, v in sorted(result.relations.items())]
    lines.append(("support_bound", result.support_bound))
    lines += [(f"note.{k}", v) for k, v in sorted(result.notes.items())]
    return lines, [], EXIT_OK if report.satisfied else EXIT_NEGATIVE


def _joint(result: JointPMF):
    lines: List[Line] = [
        ("result", "feasible" if result.family == LP_FAMILY else "built"),
        ("family", result.family),
        ("n", result.n),
        ("N", result.N),
        ("captured_mass", result.captured_mass),
    ]
    lines += [(f"meta.{k}", v) for k, v in sorted(result.metadata.items()) if k not in ("N",)]
    for ce in result.predicted:
        lines.append((f"ce.x{ce.target}", f"slopes={format_value(ce.slopes)} intercept={format_value(ce.intercept)}"))
    artifacts = [("joint_pmf", "joint_pmf.csv", lambda path: write_joint_pmf_csv(result, path))]
    return lines, artifacts, EXIT_OK


def _certificate(result: FarkasCertificate):
    lines: List[Line] = [
        ("result", "infeasible"),
        ("N", result.N),
        ("y0", result.y0),
        ("certificate_length", result.y.size + 1),
    ]
    artifacts = [("certificate", "certificate.csv", lambda path: write_certificate_csv(result, path))]
    return lines, artifacts, EXIT_NEGATIVE


def _oracle(result: OracleResult):
    table = result.table
    lines: List[Line] = [
        ("result", "tabulated"),
        ("family", result.family),
        ("target", table.target),
        ("configurations", len(table)),
        ("skipped", table.skipped),
        ("mass_threshold", table.threshold),
    ]
    if result.fit is not None:
        lines += [(f"fit.{k}", v) for k, v in result.fit.to_dict().items() if k != "target"]
    if result.fit_error is not None:
        lines.append(("fit.error", result.fit_error))
    artifacts = [("ce_table", "ce_table.csv", lambda path: write_ce_table_csv(table, path))]
    return lines, artifacts, EXIT_OK


def _samples(result: SampleBatch):
    lines: List[Line] = [
        ("result", "sampled"),
        ("family", result.family),
        ("draws", result.samples.shape[0]),
        ("seed", result.seed),
        ("sample_mean", result.samples.mean(axis=0)),
    ]
    artifacts = [("samples", "samples.csv", lambda path: write_samples_csv(result.samples, path))]
    return lines, artifacts, EXIT_OK


def _gibbs(result: GibbsResult):
    diagnostic = result.diagnostic
    lines: List[Line] = [
        ("result", "diagnosed"),
        ("spec", result.spec),
        ("draws", result.samples.shape[0]),
        ("seed", result.seed),
        ("target", diagnostic.target),
        ("discrepancy", diagnostic.discrepancy),
        ("configurations", diagnostic.visits.size),
        ("min_visits", diagnostic.min_visits),
    ]
    artifacts = [
        ("samples", "gibbs_samples.csv", lambda path: write_samples_csv(result.samples, path)),
        ("diagnostic", "gibbs_diagnostic.csv", lambda path: _write_frame(diagnostic.to_frame(), path)),
    ]
    return lines, artifacts, EXIT_OK


def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


SUMMARIZERS = [
    (CompatVerdict, _verdict),
    (ClassifyResult, _classify),
    (JointPMF, _joint),
    (FarkasCertificate, _certificate),
    (OracleResult, _oracle),
    (SampleBatch, _samples),
    (GibbsResult, _gibbs),
]


def summarize(result: Any) -> Tuple[List[Line], List[Artifact], int]:
    for kind, summarizer in SUMMARIZERS:
        if isinstance(result, kind):
            return summarizer(result)
    raise TypeError(f"No report for {type(result).__name__}")


def emit_report(
    result: Any,
    fmt: str = "text",
    out_dir: Optional[Union[str, Path]] = None,
    stream: Optional[TextIO] = None
) -> int:
    """
    Print ``key: value`` lines and write the result's CSV artifacts.

    Args:
        result: Command result
        fmt: "text" prints the report; "csv" also writes report.csv
        out_dir: Artifact directory. When None, only a certificate is written,
            into the working directory; other results write no files
        stream: Output stream (defaults to stdout)

    Returns:
        Exit code
    """
    if fmt not in ("text", "csv"):
        raise ValueError(f"Unknown report format '{fmt}'")
    stream = sys.stdout if stream is None else stream
    lines, artifacts, code = summarize(result)
    if out_dir is None and isinstance(result, FarkasCertificate):
        out_dir = Path.cwd()
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for key, filename, writer in artifacts:
            lines.append((f"{key}_path", str(writer(out_dir / filename))))
        if fmt == "csv":
            report_path = out_dir / "report.csv"
            pd.DataFrame(
                [(key, format_value(value)) for key, value in lines], columns=["key", "value"]
            ).to_csv(report_path, index=False)
            lines.append(("report_path", str(report_path)))
    for key, value in lines:
        stream.write(f"{key}: {format_value(value)}\n")
    stream.flush()
    logger.info(f"Report emitted with exit code {code}")
    return code
