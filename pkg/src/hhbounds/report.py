"""Aggregation of certificates, gap and bound values into serializable reports.

Row semantics: rows bounding the gap from above carry margin = bound - gap;
the sandwich rows bound the integral mean from below or above and carry the
correspondingly oriented margin (mean - bound, bound - mean), so that HOLDS
always means margin >= -1e-8. Tightness is the achievement ratio of the
bound, clamped into [0, inf) and defined as 0 for the 0/0 case.

CSV columns are fixed: spec_id, theorem_id, status, bound, gap, margin,
tightness, notes, with reals printed to 17 significant digits so every value
reparses to the identical double. JSON mirrors the dataclasses field for
field and round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

from .bounds import MEAN_LOWER, MEAN_UPPER, BoundValue, evaluate_all
from .expr import evaluate
from .funcspec import (
    ProblemSpec,
    certify_strong_phi_convexity,
    derivative_power,
    function_of,
    validate,
)
from .quad import GapResult, verify_lemma_identity

__all__ = [
    "MARGIN_TOL",
    "STATUS_HOLDS",
    "STATUS_VIOLATED",
    "STATUS_INAPPLICABLE",
    "STATUS_ERROR",
    "CertificateSummary",
    "ReportRow",
    "BoundReport",
    "build_report",
    "run_check",
    "serialize",
    "serialize_many",
    "report_from_json",
]

MARGIN_TOL = 1e-8

STATUS_HOLDS = "HOLDS"
STATUS_VIOLATED = "VIOLATED"
STATUS_INAPPLICABLE = "INAPPLICABLE"
STATUS_ERROR = "ERROR"


@dataclass(frozen=True)
class CertificateSummary:
    target: str  # "f" or "fprime_q"
    passed: bool
    worst_slack: float
    witness: Optional[tuple[float, float, float, float, float]] = None


@dataclass(frozen=True)
class ReportRow:
    theorem_id: str
    status: str
    bound: Optional[float]
    margin: Optional[float]
    tightness: Optional[float]
    notes: str = ""


@dataclass(frozen=True)
class BoundReport:
    spec_id: str
    gap: float
    lemma_residual: float
    mean: float
    certificates: tuple[CertificateSummary, ...]
    rows: tuple[ReportRow, ...]


def _ratio(numer: float, denom: float) -> float:
    if denom == 0.0:
        return 0.0 if numer == 0.0 else math.inf
    return max(0.0, numer / denom)


def _row_from_bound(bv: BoundValue, gap: float, mean: float) -> ReportRow:
    if not bv.applicable:
        return ReportRow(
            bv.theorem_id,
            STATUS_INAPPLICABLE,
            None,
            None,
            None,
            bv.inapplicability_reason or "",
        )
    if bv.error is not None:
        return ReportRow(bv.theorem_id, STATUS_ERROR, bv.value, None, None, bv.error)
    if bv.kind == MEAN_LOWER:
        margin = mean - bv.value
        tightness = _ratio(bv.value, mean)
    elif bv.kind == MEAN_UPPER:
        margin = bv.value - mean
        tightness = _ratio(mean, bv.value)
    else:
        margin = bv.value - gap
        tightness = _ratio(gap, bv.value)
    status = STATUS_HOLDS if margin >= -MARGIN_TOL else STATUS_VIOLATED
    return ReportRow(bv.theorem_id, status, bv.value, margin, tightness, bv.notes)


def build_report(
    spec: ProblemSpec,
    certificates: tuple[CertificateSummary, ...],
    gap_result: GapResult,
    bound_values: list[BoundValue],
) -> BoundReport:
    """Assemble one report; row order follows ``bound_values`` order."""
    gap = gap_result.lhs_gap
    phi_a = float(spec.phi(spec.interval.a))
    phi_b = float(spec.phi(spec.interval.b))
    trapezoid = (evaluate(spec.f, phi_a) + evaluate(spec.f, phi_b)) / 2.0
    mean = trapezoid - gap
    rows = tuple(_row_from_bound(bv, gap, mean) for bv in bound_values)
    return BoundReport(
        spec_id=spec.spec_id,
        gap=gap,
        lemma_residual=gap_result.residual,
        mean=mean,
        certificates=certificates,
        rows=rows,
    )


def run_check(
    spec: ProblemSpec,
    with_certificates: bool = True,
    diagnostics: bool = False,
) -> BoundReport:
    """Full pipeline for one spec: validate, certify, verify, bound, report."""
    if not spec.valid:
        spec = validate(spec)
    certificates: tuple[CertificateSummary, ...] = ()
    cert_f = cert_deriv = None
    if with_certificates:
        cert_f = certify_strong_phi_convexity(
            function_of(spec.f), spec.phi, spec.interval, spec.modulus_f, spec.grid
        )
        cert_deriv = certify_strong_phi_convexity(
            derivative_power(spec.f, spec.q),
            spec.phi,
            spec.interval,
            spec.modulus_deriv,
            spec.grid,
        )
        certificates = (
            CertificateSummary("f", cert_f.passed, cert_f.worst_slack, cert_f.witness),
            CertificateSummary(
                "fprime_q", cert_deriv.passed, cert_deriv.worst_slack, cert_deriv.witness
            ),
        )
    gap_result = verify_lemma_identity(spec)
    bound_values = evaluate_all(
        spec,
        cert_f=cert_f,
        cert_deriv=cert_deriv,
        assume_certified=not with_certificates,
        diagnostics=diagnostics,
    )
    return build_report(spec, certificates, gap_result, bound_values)


# ---------------------------------------------------------------------------
# serialization

CSV_COLUMNS = (
    "spec_id",
    "theorem_id",
    "status",
    "bound",
    "gap",
    "margin",
    "tightness",
    "notes",
)


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{value:.17g}"


def _csv_rows(report: BoundReport):
    for row in report.rows:
        yield (
            report.spec_id,
            row.theorem_id,
            row.status,
            _fmt(row.bound),
            _fmt(report.gap),
            _fmt(row.margin),
            _fmt(row.tightness),
            row.notes,
        )


def _report_dict(report: BoundReport) -> dict:
    return {
        "spec_id": report.spec_id,
        "gap": report.gap,
        "lemma_residual": report.lemma_residual,
        "mean": report.mean,
        "certificates": [
            {
                "target": c.target,
                "passed": c.passed,
                "worst_slack": c.worst_slack,
                "witness": list(c.witness) if c.witness is not None else None,
            }
            for c in report.certificates
        ],
        "rows": [
            {
                "theorem_id": r.theorem_id,
                "status": r.status,
                "bound": r.bound,
                "margin": r.margin,
                "tightness": r.tightness,
                "notes": r.notes,
            }
            for r in report.rows
        ],
    }


def serialize(report: BoundReport, format: str = "csv") -> bytes:
    """Encode one report as CSV or JSON bytes."""
    return serialize_many([report], format)


def serialize_many(reports: list[BoundReport], format: str = "csv") -> bytes:
    """Encode several reports: one CSV table, or a JSON list."""
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for report in reports:
            writer.writerows(_csv_rows(report))
        return buf.getvalue().encode("utf-8")
    if format == "json":
        payload = [_report_dict(r) for r in reports]
        if len(reports) == 1:
            payload = payload[0]
        return (json.dumps(payload, indent=2) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {format!r}, expected 'csv' or 'json'")


def report_from_json(data: bytes | str) -> BoundReport:
    """Inverse of ``serialize(report, 'json')`` for a single report."""
    obj = json.loads(data)
    certificates = tuple(
        CertificateSummary(
            target=c["target"],
            passed=c["passed"],
            worst_slack=c["worst_slack"],
            witness=tuple(c["witness"]) if c["witness"] is not None else None,
        )
        for c in obj["certificates"]
    )
    rows = tuple(
        ReportRow(
            theorem_id=r["theorem_id"],
            status=r["status"],
            bound=r["bound"],
            margin=r["margin"],
            tightness=r["tightness"],
            notes=r["notes"],
        )
        for r in obj["rows"]
    )
    return BoundReport(
        spec_id=obj["spec_id"],
        gap=obj["gap"],
        lemma_residual=obj["lemma_residual"],
        mean=obj["mean"],
        certificates=certificates,
        rows=rows,
    )
