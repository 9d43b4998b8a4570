"""Rendering, serialization, and report assembly."""

import random
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dataset_from_counts, random_instance
from morphmap import (
    ACCEPT_ALL,
    ArgumentError,
    EvaluationReport,
    MapMatrix,
    ParseError,
    PoolKind,
    ScalarIndicators,
    ScorePool,
    ThresholdTable,
    ValidationError,
    build_report,
    emit_report,
    format_percent,
    parse_report,
    render_map_table,
    report_to_json,
    thresholds_from_json,
    thresholds_to_json,
)


class TestFormatPercent:
    @pytest.mark.parametrize(
        "value,expected",
        [
            (0.396, "39.6%"),
            (0.0, "0.0%"),
            (0.00049, "0.0%"),
            (1.0, "100.0%"),
            (0.5, "50.0%"),
            (0.0305, "3.1%"),   # tie rounds away from zero
            (0.1225, "12.3%"),
        ],
    )
    def test_examples(self, value, expected):
        assert format_percent(value) == expected

    @given(st.floats(0, 1, allow_nan=False))
    @settings(max_examples=300, deadline=None)
    def test_rounding_bound(self, value):
        rendered = Decimal(format_percent(value)[:-1])
        assert abs(rendered - Decimal(str(value)) * 100) <= Decimal("0.05")


class TestRenderMapTable:
    def matrix(self):
        return MapMatrix(((0.5, 0.5), (0.5, 0.0)), morph_count=2)

    def test_markdown(self):
        table = render_map_table(self.matrix(), "markdown")
        assert table.splitlines() == [
            "| r \\ c | 1 | 2 |",
            "| ---: | ---: | ---: |",
            "| 1 | 50.0% | 50.0% |",
            "| 2 | 50.0% | 0.0% |",
        ]

    def test_csv(self):
        table = render_map_table(self.matrix(), "csv")
        assert table == "r\\c,1,2\n1,50.0%,50.0%\n2,50.0%,0.0%\n"

    def test_unknown_style(self):
        with pytest.raises(ArgumentError):
            render_map_table(self.matrix(), "html")


def sample_report(with_fnmr=True, probes=2):
    counts = {
        "A": [{"F1": probes, "F2": 1}, {"F1": probes, "F2": 1}],
        "B": [{"F1": 1, "F2": 0}, {"F1": 0, "F2": 0}],
    }
    ds, thresholds = dataset_from_counts(counts, probes=probes,
                                         frs_ids=["F1", "F2"])
    mated = None
    if with_fnmr:
        mated = [
            ScorePool("F1", (0.6, 0.4, 0.55), PoolKind.BONA_FIDE_MATED),
            ScorePool("F2", (0.7, 0.8), PoolKind.BONA_FIDE_MATED),
        ]
    return build_report(ds, thresholds, dataset_label="sample",
                        filter_description="alpha=0.5", mated_pools=mated)


class TestBuildReport:
    def test_scalars_cover_every_frs(self):
        report = sample_report()
        assert set(report.scalars) == {"F1", "F2"}
        assert report.morph_count == report.map_matrix.morph_count == 2
        assert all(s.mmpmr is None for s in report.scalars.values())

    def test_single_probe_adds_mmpmr(self):
        report = sample_report(probes=1)
        assert all(s.mmpmr is not None for s in report.scalars.values())

    def test_fnmr_uses_per_frs_thresholds(self):
        report = sample_report()
        assert report.fnmr == {"F1": pytest.approx(1 / 3), "F2": 0.0}

    def test_without_mated_pools(self):
        assert sample_report(with_fnmr=False).fnmr is None

    def test_report_invariants(self):
        report = sample_report()
        with pytest.raises(ValidationError):
            EvaluationReport(
                dataset_label="x", filter_description="", morph_count=3,
                map_matrix=report.map_matrix, scalars=report.scalars,
                thresholds=report.thresholds,
            )
        with pytest.raises(ValidationError):
            EvaluationReport(
                dataset_label="x", filter_description="", morph_count=2,
                map_matrix=report.map_matrix,
                scalars={"F1": ScalarIndicators(1.0, 1.0, 1.0, mmpmr=1.0)},
                thresholds=report.thresholds,
            )


class TestJsonRoundTrip:
    def test_lossless(self):
        report = sample_report()
        text = report_to_json(report)
        assert parse_report(text) == report

    def test_round_trip_without_fnmr(self):
        report = sample_report(with_fnmr=False)
        assert parse_report(report_to_json(report)) == report

    def test_full_precision_values(self):
        rng = random.Random(7)
        inst = random_instance(rng, max_morphs=7, max_frs=3, max_probes=3)
        report = build_report(inst.ds, inst.thresholds)
        again = parse_report(report_to_json(report))
        assert again.map_matrix.values == report.map_matrix.values
        assert again.thresholds.entries == report.thresholds.entries

    def test_deterministic_bytes(self):
        report = sample_report()
        reordered = EvaluationReport(
            dataset_label=report.dataset_label,
            filter_description=report.filter_description,
            morph_count=report.morph_count,
            map_matrix=report.map_matrix,
            scalars=dict(reversed(list(report.scalars.items()))),
            thresholds=ThresholdTable(
                entries=dict(reversed(list(report.thresholds.entries.items()))),
                target_fmr=report.thresholds.target_fmr,
            ),
            fnmr=dict(reversed(list(report.fnmr.items()))),
        )
        assert reordered == report
        assert report_to_json(reordered) == report_to_json(report)
        assert emit_report(reordered, "markdown") == emit_report(report, "markdown")

    def test_malformed_json(self):
        with pytest.raises(ParseError):
            parse_report("{not json")
        with pytest.raises(ParseError):
            parse_report('{"dataset_label": "x"}')


class TestThresholdJson:
    def test_round_trip(self):
        table = ThresholdTable({"A": 0.4932, "B": ACCEPT_ALL}, 0.001)
        assert thresholds_from_json(thresholds_to_json(table)) == table

    def test_accept_all_is_a_string_in_json(self):
        text = thresholds_to_json(ThresholdTable({"B": ACCEPT_ALL}, 0.0))
        assert '"accept-all"' in text

    def test_rejects_bad_payloads(self):
        with pytest.raises(ParseError):
            thresholds_from_json("[]")
        with pytest.raises(ParseError):
            thresholds_from_json('{"target_fmr": 0.1, "entries": {"A": "high"}}')
        with pytest.raises(ParseError):
            thresholds_from_json('{"target_fmr": "x", "entries": {}}')


class TestEmitReport:
    def test_json_single_document(self):
        outputs = emit_report(sample_report(), "json")
        assert set(outputs) == {"report.json"}

    def test_markdown_sections(self):
        outputs = emit_report(sample_report(), "markdown")
        text = outputs["report.md"]
        assert "## Attack potential matrix" in text
        assert "## Per-FRS indicators" in text
        assert "## Thresholds" in text
        assert "## FNMR" in text
        assert "| 1 | 50.0% | 50.0% |" in text

    def test_csv_bundle_one_file_per_table(self):
        outputs = emit_report(sample_report(), "csv")
        assert set(outputs) == {"map.csv", "scalars.csv", "thresholds.csv", "fnmr.csv"}
        assert outputs["map.csv"].startswith("r\\c,1,2\n")
        assert outputs["scalars.csv"].splitlines()[0] == \
            "frs_id,minmax_mmpmr,fmmpmr,prodavg_mmpmr"

    def test_csv_bundle_without_fnmr(self):
        outputs = emit_report(sample_report(with_fnmr=False), "csv")
        assert "fnmr.csv" not in outputs

    def test_unknown_format(self):
        with pytest.raises(ArgumentError):
            emit_report(sample_report(), "pdf")
