"""Report assembly and serialization tests."""

import csv
import io
import json

import numpy as np
import pytest

from hhbounds.bounds import BoundValue, GAP_UPPER, MEAN_LOWER, MEAN_UPPER
from hhbounds.corpus import spec_from_config
from hhbounds.funcspec import validate
from hhbounds.quad import GapResult
from hhbounds.report import (
    BoundReport,
    CertificateSummary,
    ReportRow,
    build_report,
    report_from_json,
    run_check,
    serialize,
    serialize_many,
)


def make(cfg):
    return validate(spec_from_config(cfg))


SQ_Q1 = {"f": "x^2", "a": 0, "b": 1, "q": 1, "id": "sq"}


class TestBuildReport:
    def test_power_mean_row_values(self):
        report = run_check(make(SQ_Q1))
        row = {r.theorem_id: r for r in report.rows}["power_mean"]
        assert row.status == "HOLDS"
        assert row.bound == 0.25
        assert report.gap == pytest.approx(1 / 6, abs=1e-9)
        assert row.margin == pytest.approx(0.25 - 1 / 6, abs=1e-9)
        assert row.tightness == pytest.approx(2 / 3, abs=1e-8)

    def test_sandwich_equality_case_has_zero_margins(self):
        spec = make({"f": "x^2", "a": 0, "b": 1, "q": 1, "c_f": 1.0, "c_deriv": 0.0})
        report = run_check(spec)
        rows = {r.theorem_id: r for r in report.rows}
        for tid in ("sandwich_lower", "sandwich_upper"):
            assert rows[tid].status == "HOLDS"
            assert rows[tid].margin == pytest.approx(0.0, abs=1e-9)
            assert rows[tid].tightness == pytest.approx(1.0, abs=1e-8)

    def test_q1_rows_inapplicable_with_reason(self):
        report = run_check(make(SQ_Q1))
        rows = {r.theorem_id: r for r in report.rows}
        for tid in ("split_holder", "holder"):
            assert rows[tid].status == "INAPPLICABLE"
            assert rows[tid].notes == "p undefined at q=1"
            assert rows[tid].bound is None

    def test_row_order(self):
        report = run_check(make({"f": "x^2", "a": 0, "b": 1, "q": 2}))
        assert [r.theorem_id for r in report.rows] == [
            "sandwich_lower",
            "sandwich_upper",
            "power_mean",
            "split_holder",
            "split_holder_relaxed",
            "holder",
            "power_mean_c0",
            "split_holder_c0",
            "holder_c0",
        ]

    def test_violated_requires_negative_margin(self):
        spec = make(SQ_Q1)
        fake = [BoundValue("power_mean", 0.05, kind=GAP_UPPER)]  # below the gap
        report = build_report(spec, (), GapResult(1 / 6, 1 / 6, 0.0), fake)
        assert report.rows[0].status == "VIOLATED"

    def test_mean_oriented_rows(self):
        spec = make(SQ_Q1)
        fake = [
            BoundValue("sandwich_lower", 0.2, kind=MEAN_LOWER),
            BoundValue("sandwich_upper", 0.4, kind=MEAN_UPPER),
        ]
        report = build_report(spec, (), GapResult(1 / 6, 1 / 6, 0.0), fake)
        # mean of x^2 over [0,1] is 1/3
        assert report.mean == pytest.approx(1 / 3, abs=1e-9)
        lower, upper = report.rows
        assert lower.margin == pytest.approx(1 / 3 - 0.2, abs=1e-9)
        assert upper.margin == pytest.approx(0.4 - 1 / 3, abs=1e-9)
        assert lower.tightness == pytest.approx(0.2 / (1 / 3), abs=1e-8)
        assert upper.tightness == pytest.approx((1 / 3) / 0.4, abs=1e-8)

    def test_zero_over_zero_tightness(self):
        spec = make({"f": "2*x + 1", "a": 0, "b": 1, "q": 1, "id": "lin"})
        report = run_check(spec)
        rows = {r.theorem_id: r for r in report.rows}
        assert report.gap == pytest.approx(0.0, abs=1e-12)
        assert rows["power_mean"].tightness == pytest.approx(0.0, abs=1e-9)

    def test_tightness_within_unit_band_for_holding_rows(self):
        for cfg in ({"f": "x^2", "a": 0, "b": 1, "q": 2, "c_f": 1, "c_deriv": 2},
                    {"f": "exp(x)", "a": 0, "b": 1, "q": 2, "c_f": 0.5, "c_deriv": 2}):
            report = run_check(make(cfg))
            for row in report.rows:
                if row.status == "HOLDS" and row.bound and row.bound > 0:
                    assert 0.0 <= row.tightness <= 1.0 + 1e-8


def random_report(rng) -> BoundReport:
    statuses = ("HOLDS", "VIOLATED", "INAPPLICABLE", "ERROR")
    rows = tuple(
        ReportRow(
            theorem_id=f"row{k}",
            status=str(rng.choice(statuses)),
            bound=None if rng.random() < 0.2 else float(rng.normal() * 10.0 ** rng.integers(-8, 8)),
            margin=None if rng.random() < 0.2 else float(rng.normal()),
            tightness=None if rng.random() < 0.2 else float(rng.random()),
            notes="" if rng.random() < 0.5 else "note, with comma and \"quote\"",
        )
        for k in range(rng.integers(0, 6))
    )
    certs = tuple(
        CertificateSummary(
            target=t,
            passed=bool(rng.random() < 0.8),
            worst_slack=float(rng.normal() * 1e-6),
            witness=None
            if rng.random() < 0.5
            else tuple(float(v) for v in rng.random(5)),
        )
        for t in ("f", "fprime_q")
    )
    return BoundReport(
        spec_id=f"spec-{rng.integers(1000)}",
        gap=float(rng.normal()),
        lemma_residual=float(abs(rng.normal()) * 1e-10),
        mean=float(rng.normal()),
        certificates=certs,
        rows=rows,
    )


class TestSerialization:
    def test_csv_header_and_line_count(self):
        report = run_check(make(SQ_Q1))
        text = serialize(report, "csv").decode()
        lines = text.strip().split("\n")
        assert lines[0] == "spec_id,theorem_id,status,bound,gap,margin,tightness,notes"
        assert len(lines) == len(report.rows) + 1

    def test_empty_rows_gives_header_only(self):
        spec = make(SQ_Q1)
        report = build_report(spec, (), GapResult(1 / 6, 1 / 6, 0.0), [])
        text = serialize(report, "csv").decode()
        assert text.strip().split("\n") == [
            "spec_id,theorem_id,status,bound,gap,margin,tightness,notes"
        ]

    def test_csv_reals_reparse_to_identical_doubles(self):
        report = run_check(make(SQ_Q1))
        reader = csv.DictReader(io.StringIO(serialize(report, "csv").decode()))
        for parsed, row in zip(reader, report.rows):
            assert float(parsed["gap"]) == report.gap
            if row.bound is not None:
                assert float(parsed["bound"]) == row.bound
            if row.margin is not None:
                assert float(parsed["margin"]) == row.margin

    def test_json_round_trip_on_randomized_reports(self):
        rng = np.random.default_rng(1234)
        for _ in range(100):
            report = random_report(rng)
            again = report_from_json(serialize(report, "json"))
            assert again == report

    def test_json_round_trip_on_real_report(self):
        report = run_check(make({"f": "exp(x)", "a": 0, "b": 1, "q": 2, "c_f": 0.5,
                                 "c_deriv": 1.0}))
        assert report_from_json(serialize(report, "json")) == report

    def test_multi_report_csv_concatenates_rows(self):
        reports = [run_check(make(SQ_Q1)),
                   run_check(make({"f": "exp(x)", "a": 0, "b": 1, "id": "e"}))]
        lines = serialize_many(reports, "csv").decode().strip().split("\n")
        assert len(lines) == 1 + sum(len(r.rows) for r in reports)

    def test_unknown_format_rejected(self):
        report = run_check(make(SQ_Q1))
        with pytest.raises(ValueError):
            serialize(report, "yaml")
