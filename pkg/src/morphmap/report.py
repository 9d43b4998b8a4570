"""Rendering and serialization of evaluation results.

Human-readable tables (markdown, CSV) format proportions as percentages
with one decimal place, ties rounded away from zero; the JSON report keeps
full precision (shortest round-trip decimals) and is lossless under
emit -> parse. All rendering is deterministic: FRS rows are sorted and JSON
keys are sorted, so equal reports produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from math import isfinite

from .errors import ArgumentError, ParseError, ValidationError
from .metrics import (
    ScalarIndicator,
    compute_fnmr,
    compute_map_matrix,
    indicator_rate,
    prodavg_mmpmr,
)
from .model import ACCEPT_ALL, FrsId, MapMatrix, ScoreDataset, ScorePool, ThresholdTable

ACCEPT_ALL_LABEL = "accept-all"


@dataclass(frozen=True)
class ScalarIndicators:
    """Per-FRS scalar indicator values; mmpmr only exists for single-probe data."""

    minmax: float
    fmmpmr: float
    prodavg: float
    mmpmr: float | None = None


@dataclass(frozen=True)
class EvaluationReport:
    """Everything one evaluation run produced, ready to render."""

    dataset_label: str
    filter_description: str
    morph_count: int
    map_matrix: MapMatrix
    scalars: dict[FrsId, ScalarIndicators]
    thresholds: ThresholdTable
    fnmr: dict[FrsId, float] | None = None

    def __post_init__(self):
        if self.morph_count != self.map_matrix.morph_count:
            raise ValidationError(
                f"report morph_count {self.morph_count} disagrees with matrix"
                f" morph_count {self.map_matrix.morph_count}"
            )
        if self.map_matrix.rows != 1:
            offending = [frs for frs, s in self.scalars.items() if s.mmpmr is not None]
            if offending:
                raise ValidationError(
                    "single-probe MMPMR is only defined when there is one probe"
                    f" per subject; set for {offending}"
                )


def build_report(ds: ScoreDataset, thresholds: ThresholdTable, *,
                 dataset_label: str = "", filter_description: str = "",
                 mated_pools: list[ScorePool] | None = None) -> EvaluationReport:
    """Run the full metric battery over a dataset.

    Produces the attack-potential matrix plus the per-FRS scalar indicators
    for every FRS in the dataset; with bona fide pools, also the per-FRS
    FNMR at the same thresholds.
    """
    matrix = compute_map_matrix(ds, thresholds)
    single_probe = ds.probes_per_subject == 1
    scalars = {}
    for frs in ds.frs_list:
        scalars[frs] = ScalarIndicators(
            minmax=indicator_rate(ScalarIndicator.MINMAX_MMPMR, ds, thresholds, frs),
            fmmpmr=indicator_rate(ScalarIndicator.FMMPMR, ds, thresholds, frs),
            prodavg=prodavg_mmpmr(ds, thresholds, frs),
            mmpmr=(indicator_rate(ScalarIndicator.MMPMR, ds, thresholds, frs)
                   if single_probe else None),
        )
    fnmr = None
    if mated_pools is not None:
        fnmr = {}
        for pool in mated_pools:
            if pool.frs in fnmr:
                raise ArgumentError(f"duplicate bona fide pool for FRS {pool.frs!r}")
            fnmr[pool.frs] = compute_fnmr(pool, thresholds.threshold_for(pool.frs))
    return EvaluationReport(
        dataset_label=dataset_label,
        filter_description=filter_description,
        morph_count=ds.morph_count,
        map_matrix=matrix,
        scalars=scalars,
        thresholds=thresholds,
        fnmr=fnmr,
    )


def format_percent(value: float) -> str:
    """Render a proportion as a one-decimal percentage, ties away from zero.

    Rounds the shortest decimal representation of the stored value, so the
    text matches what a reader would compute from the printed number.
    """
    quantized = (Decimal(str(value)) * 100).quantize(
        Decimal("0.1"), rounding=ROUND_HALF_UP
    )
    return f"{quantized}%"


def _format_threshold(tau: float) -> str:
    return ACCEPT_ALL_LABEL if tau == ACCEPT_ALL else f"{tau:.5f}"


def render_map_table(matrix: MapMatrix, style: str = "markdown") -> str:
    """Render the matrix with attempt-count row labels and FRS-count columns.

    The CSV form doubles as heatmap input: one labeled row per attempt
    count, one labeled column per FRS count.
    """
    col_labels = [str(c) for c in range(1, matrix.cols + 1)]
    body = [
        (str(r + 1), [format_percent(v) for v in matrix.values[r]])
        for r in range(matrix.rows)
    ]
    if style == "markdown":
        lines = ["| r \\ c | " + " | ".join(col_labels) + " |"]
        lines.append("| ---: |" + " ---: |" * matrix.cols)
        lines.extend(
            f"| {label} | " + " | ".join(cells) + " |" for label, cells in body
        )
        return "\n".join(lines)
    if style == "csv":
        lines = ["r\\c," + ",".join(col_labels)]
        lines.extend(label + "," + ",".join(cells) for label, cells in body)
        return "\n".join(lines) + "\n"
    raise ArgumentError(f"unknown table style {style!r}")


def _encode_threshold(tau: float):
    return ACCEPT_ALL_LABEL if tau == ACCEPT_ALL else tau


def _decode_threshold(raw, frs: str) -> float:
    if raw == ACCEPT_ALL_LABEL:
        return ACCEPT_ALL
    if isinstance(raw, (int, float)) and not isinstance(raw, bool) and isfinite(raw):
        return float(raw)
    raise ParseError(f"threshold for {frs!r} must be a finite number or"
                     f" {ACCEPT_ALL_LABEL!r}, got {raw!r}")


def thresholds_to_json(table: ThresholdTable) -> str:
    payload = {
        "target_fmr": table.target_fmr,
        "entries": {frs: _encode_threshold(tau) for frs, tau in table.entries.items()},
    }
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def thresholds_from_json(text: str | bytes) -> ThresholdTable:
    try:
        payload = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"invalid threshold json: {exc}") from None
    if not isinstance(payload, dict) or "target_fmr" not in payload or "entries" not in payload:
        raise ParseError("threshold json needs 'target_fmr' and 'entries' keys")
    entries_raw = payload["entries"]
    if not isinstance(entries_raw, dict):
        raise ParseError("threshold json 'entries' must be an object")
    target = payload["target_fmr"]
    if not isinstance(target, (int, float)) or isinstance(target, bool):
        raise ParseError(f"target_fmr must be a number, got {target!r}")
    entries = {frs: _decode_threshold(raw, frs) for frs, raw in entries_raw.items()}
    return ThresholdTable(entries=entries, target_fmr=float(target))


def report_to_json(report: EvaluationReport) -> str:
    matrix = report.map_matrix
    payload = {
        "dataset_label": report.dataset_label,
        "filter": report.filter_description,
        "morph_count": report.morph_count,
        "map": {
            "rows": matrix.rows,
            "cols": matrix.cols,
            "morph_count": matrix.morph_count,
            "values": [list(row) for row in matrix.values],
        },
        "scalars": {
            frs: {
                "mmpmr": s.mmpmr,
                "minmax": s.minmax,
                "fmmpmr": s.fmmpmr,
                "prodavg": s.prodavg,
            }
            for frs, s in report.scalars.items()
        },
        "thresholds": {
            "target_fmr": report.thresholds.target_fmr,
            "entries": {
                frs: _encode_threshold(tau)
                for frs, tau in report.thresholds.entries.items()
            },
        },
        "fnmr": report.fnmr,
    }
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def parse_report(text: str | bytes) -> EvaluationReport:
    """Rebuild a report from its JSON form; exact inverse of the JSON emit."""
    try:
        payload = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"invalid report json: {exc}") from None
    try:
        map_obj = payload["map"]
        matrix = MapMatrix(
            values=tuple(tuple(float(v) for v in row) for row in map_obj["values"]),
            morph_count=int(map_obj["morph_count"]),
        )
        scalars = {
            frs: ScalarIndicators(
                minmax=float(raw["minmax"]),
                fmmpmr=float(raw["fmmpmr"]),
                prodavg=float(raw["prodavg"]),
                mmpmr=None if raw["mmpmr"] is None else float(raw["mmpmr"]),
            )
            for frs, raw in payload["scalars"].items()
        }
        thresholds = ThresholdTable(
            entries={
                frs: _decode_threshold(raw, frs)
                for frs, raw in payload["thresholds"]["entries"].items()
            },
            target_fmr=float(payload["thresholds"]["target_fmr"]),
        )
        fnmr_raw = payload["fnmr"]
        fnmr = None if fnmr_raw is None else {
            frs: float(v) for frs, v in fnmr_raw.items()
        }
        return EvaluationReport(
            dataset_label=str(payload["dataset_label"]),
            filter_description=str(payload["filter"]),
            morph_count=int(payload["morph_count"]),
            map_matrix=matrix,
            scalars=scalars,
            thresholds=thresholds,
            fnmr=fnmr,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed report json: {exc}") from None


def _scalar_rows(report: EvaluationReport, single_probe: bool):
    for frs in sorted(report.scalars):
        s = report.scalars[frs]
        row = [frs]
        if single_probe:
            row.append(format_percent(s.mmpmr) if s.mmpmr is not None else "")
        row.extend([format_percent(s.minmax), format_percent(s.fmmpmr),
                    format_percent(s.prodavg)])
        yield row


def _markdown_report(report: EvaluationReport) -> str:
    single_probe = report.map_matrix.rows == 1
    lines = [f"# Evaluation report: {report.dataset_label}", ""]
    lines.append(f"- filter: {report.filter_description or '(none)'}")
    lines.append(f"- morphed images: {report.morph_count}")
    lines.append(f"- threshold target FMR: {report.thresholds.target_fmr!r}")
    lines.append("")
    lines.append("## Attack potential matrix")
    lines.append("")
    lines.append("Rows: minimum successful attempts per subject (r)."
                 " Columns: minimum number of FRSs fooled (c).")
    lines.append("")
    lines.append(render_map_table(report.map_matrix, style="markdown"))
    lines.append("")
    lines.append("## Per-FRS indicators")
    lines.append("")
    header = ["FRS"] + (["MMPMR"] if single_probe else []) + [
        "MinMax-MMPMR", "FMMPMR", "ProdAvg-MMPMR"]
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + " --- |" * len(header))
    for row in _scalar_rows(report, single_probe):
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")
    lines.append("## Thresholds")
    lines.append("")
    lines.append("| FRS | threshold |")
    lines.append("| --- | ---: |")
    for frs in sorted(report.thresholds.entries):
        lines.append(f"| {frs} | {_format_threshold(report.thresholds.entries[frs])} |")
    if report.fnmr is not None:
        lines.append("")
        lines.append("## FNMR on bona fide attempts")
        lines.append("")
        lines.append("| FRS | FNMR |")
        lines.append("| --- | ---: |")
        for frs in sorted(report.fnmr):
            lines.append(f"| {frs} | {format_percent(report.fnmr[frs])} |")
    lines.append("")
    return "\n".join(lines)


def _csv_bundle(report: EvaluationReport) -> dict[str, str]:
    single_probe = report.map_matrix.rows == 1
    files = {"map.csv": render_map_table(report.map_matrix, style="csv")}

    header = ["frs_id"] + (["mmpmr"] if single_probe else []) + [
        "minmax_mmpmr", "fmmpmr", "prodavg_mmpmr"]
    rows = [",".join(header)]
    rows.extend(",".join(row) for row in _scalar_rows(report, single_probe))
    files["scalars.csv"] = "\n".join(rows) + "\n"

    rows = ["frs_id,threshold,target_fmr"]
    for frs in sorted(report.thresholds.entries):
        tau = _format_threshold(report.thresholds.entries[frs])
        rows.append(f"{frs},{tau},{report.thresholds.target_fmr!r}")
    files["thresholds.csv"] = "\n".join(rows) + "\n"

    if report.fnmr is not None:
        rows = ["frs_id,fnmr"]
        rows.extend(f"{frs},{format_percent(report.fnmr[frs])}"
                    for frs in sorted(report.fnmr))
        files["fnmr.csv"] = "\n".join(rows) + "\n"
    return files


def emit_report(report: EvaluationReport, fmt: str = "json") -> dict[str, str]:
    """Serialize a report into named output documents.

    Returns a mapping of file name to text content: a single document for
    ``json`` and ``markdown``, one file per table for ``csv``.
    """
    if fmt == "json":
        return {"report.json": report_to_json(report)}
    if fmt == "markdown":
        return {"report.md": _markdown_report(report)}
    if fmt == "csv":
        return _csv_bundle(report)
    raise ArgumentError(f"unknown report format {fmt!r}")
