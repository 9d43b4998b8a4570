"""Parsing, validation, and assembly of score files into datasets.

File formats (UTF-8, ``.`` decimal separator, LF or CRLF):

* comparisons CSV, header ``morph_id,frs_id,subject_index,probe_id,score``
* morph metadata CSV, header ``morph_id,n_subjects,attributes`` where the
  attributes column is ``key=value`` pairs joined by ``;`` (may be empty)
* score-pool CSV, header ``frs_id,score``

Parsing fails fast with a structured error naming the offending line.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    ArgumentError,
    CompletenessError,
    DuplicateKeyError,
    EmptyPoolError,
    EmptySelectionError,
    ParseError,
    UnknownReferenceError,
    ValidationError,
)
from .model import (
    ComparisonRecord,
    MorphEntry,
    PoolKind,
    ScoreDataset,
    ScorePool,
)

COMPARISONS_HEADER = ["morph_id", "frs_id", "subject_index", "probe_id", "score"]
MORPHS_HEADER = ["morph_id", "n_subjects", "attributes"]
POOL_HEADER = ["frs_id", "score"]


def _decode(source) -> str:
    data = source.read() if hasattr(source, "read") else source
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    return data.lstrip("﻿").replace("\r\n", "\n")


def _data_rows(source, header: list[str]) -> Iterator[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(_decode(source)))
    first = next(reader, None)
    if first is None:
        raise ParseError("empty file: missing header")
    if [cell.strip() for cell in first] != header:
        raise ParseError(
            f"expected header {','.join(header)!r}, got {','.join(first)!r}", line=1
        )
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue  # tolerate blank separator lines
        yield reader.line_num, [cell.strip() for cell in row]


def _parse_int(text: str, line: int, what: str, minimum: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"invalid {what} {text!r}", line) from None
    if value < minimum:
        raise ParseError(f"{what} must be >= {minimum}, got {value}", line)
    return value


def _parse_score(text: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"invalid score {text!r}", line) from None
    if not math.isfinite(value):
        raise ParseError(f"score must be finite, got {text!r}", line)
    return value


def _check_columns(row: list[str], expected: int, line: int) -> None:
    if len(row) != expected:
        raise ParseError(f"expected {expected} columns, got {len(row)}", line)


def parse_comparisons(source, *, dissimilarity: bool = False) -> list[ComparisonRecord]:
    """Parse a comparisons CSV into records.

    With ``dissimilarity=True`` scores are negated so that internally a
    higher value always means a closer match.
    """
    records: list[ComparisonRecord] = []
    seen: dict[tuple, int] = {}
    for line, row in _data_rows(source, COMPARISONS_HEADER):
        _check_columns(row, 5, line)
        morph_id, frs, subject_text, probe_id, score_text = row
        for name, value in (("morph_id", morph_id), ("frs_id", frs), ("probe_id", probe_id)):
            if not value:
                raise ParseError(f"empty {name}", line)
        subject = _parse_int(subject_text, line, "subject_index", minimum=1)
        score = _parse_score(score_text, line)
        if dissimilarity:
            score = -score
        key = (morph_id, frs, subject, probe_id)
        if key in seen:
            raise DuplicateKeyError(
                f"line {line}: duplicate comparison key {key!r}"
                f" (first seen at line {seen[key]})"
            )
        seen[key] = line
        records.append(ComparisonRecord(morph_id, frs, subject, probe_id, score))
    return records


def _parse_attributes(text: str, line: int) -> dict[str, str]:
    text = text.strip()
    if not text:
        return {}
    attributes: dict[str, str] = {}
    for clause in text.split(";"):
        if "=" not in clause:
            raise ParseError(f"attribute clause {clause!r} is not key=value", line)
        key, value = clause.split("=", 1)
        key = key.strip()
        if not key:
            raise ParseError(f"empty attribute key in {clause!r}", line)
        if key in attributes:
            raise ParseError(f"duplicate attribute key {key!r}", line)
        attributes[key] = value.strip()
    return attributes


def parse_morph_metadata(source) -> list[MorphEntry]:
    """Parse a morph metadata CSV into entries, enforcing n_subjects >= 2."""
    entries: list[MorphEntry] = []
    seen: dict[str, int] = {}
    for line, row in _data_rows(source, MORPHS_HEADER):
        _check_columns(row, 3, line)
        morph_id, n_text, attr_text = row
        if not morph_id:
            raise ParseError("empty morph_id", line)
        try:
            n_subjects = int(n_text)
        except ValueError:
            raise ParseError(f"invalid n_subjects {n_text!r}", line) from None
        if n_subjects < 2:
            raise ValidationError(
                f"line {line}: morph {morph_id!r} needs at least 2 contributing"
                f" subjects, got {n_subjects}"
            )
        if morph_id in seen:
            raise DuplicateKeyError(
                f"line {line}: duplicate morph_id {morph_id!r}"
                f" (first seen at line {seen[morph_id]})"
            )
        seen[morph_id] = line
        entries.append(MorphEntry(morph_id, n_subjects, _parse_attributes(attr_text, line)))
    return entries


def parse_score_pool(source, kind: PoolKind, *, dissimilarity: bool = False) -> list[ScorePool]:
    """Parse a two-column score-pool CSV into one pool per FRS.

    Pools come back in first-appearance order; score order within a pool is
    preserved. An empty data section is an error: an empty pool can neither
    calibrate a threshold nor measure FNMR.
    """
    groups: dict[str, list[float]] = {}
    for line, row in _data_rows(source, POOL_HEADER):
        _check_columns(row, 2, line)
        frs, score_text = row
        if not frs:
            raise ParseError("empty frs_id", line)
        score = _parse_score(score_text, line)
        if dissimilarity:
            score = -score
        groups.setdefault(frs, []).append(score)
    if not groups:
        raise EmptyPoolError("score pool file contains no data rows")
    return [ScorePool(frs, tuple(scores), kind) for frs, scores in groups.items()]


def assemble_dataset(records: Iterable[ComparisonRecord],
                     morphs: Iterable[MorphEntry]) -> ScoreDataset:
    """Build a validated dataset from parsed records and metadata.

    The FRS set is the union observed in the records; the probe count per
    cell is taken from the first record's cell and must hold everywhere
    (strict completeness, no missing-score tolerance). Probe scores are
    ordered by probe id for reproducible serialization.
    """
    morphs = list(morphs)
    records = list(records)
    if not morphs:
        raise ValidationError("no morph metadata entries")
    if not records:
        raise ValidationError("no comparison records")

    by_id: dict[str, MorphEntry] = {}
    for morph in morphs:
        if morph.morph_id in by_id:
            raise DuplicateKeyError(f"duplicate morph_id {morph.morph_id!r} in metadata")
        by_id[morph.morph_id] = morph

    cells: dict[tuple[str, int, str], list[tuple[str, float]]] = {}
    frs_order: list[str] = []
    seen_frs: set[str] = set()
    seen_keys: set[tuple] = set()
    for rec in records:
        morph = by_id.get(rec.morph_id)
        if morph is None:
            raise UnknownReferenceError(
                f"comparison references unknown morph {rec.morph_id!r}"
            )
        if rec.subject > morph.n_subjects:
            raise UnknownReferenceError(
                f"comparison references subject slot {rec.subject} of morph"
                f" {rec.morph_id!r}, which has only {morph.n_subjects} subjects"
            )
        if rec.key in seen_keys:
            raise DuplicateKeyError(f"duplicate comparison key {rec.key!r}")
        seen_keys.add(rec.key)
        if rec.frs not in seen_frs:
            seen_frs.add(rec.frs)
            frs_order.append(rec.frs)
        cells.setdefault((rec.morph_id, rec.subject, rec.frs), []).append(
            (rec.probe_id, rec.score)
        )

    first = records[0]
    probes = len(cells[(first.morph_id, first.subject, first.frs)])
    expected = {
        (morph.morph_id, slot, frs)
        for morph in morphs
        for slot in range(1, morph.n_subjects + 1)
        for frs in frs_order
    }
    missing = expected - cells.keys()
    wrong = {key for key, pairs in cells.items() if len(pairs) != probes}
    if missing or wrong:
        parts = []
        if missing:
            parts.append(f"missing cells: {_format_keys(missing)}")
        if wrong:
            parts.append(
                f"cells without exactly {probes} probes: {_format_keys(wrong)}"
            )
        raise CompletenessError("incomplete comparison grid: " + "; ".join(parts))

    grid = {
        key: tuple(score for _, score in sorted(pairs))
        for key, pairs in cells.items()
    }
    return ScoreDataset(tuple(morphs), tuple(frs_order), probes, grid)


def _format_keys(keys, limit: int = 8) -> str:
    keys = sorted(keys)
    shown = ", ".join(repr(k) for k in keys[:limit])
    if len(keys) > limit:
        shown += f", ... and {len(keys) - limit} more"
    return shown


@dataclass(frozen=True)
class FilterPredicate:
    """Conjunction of attribute equality clauses; empty matches everything."""

    clauses: tuple[tuple[str, str], ...] = ()

    @classmethod
    def parse(cls, specs: Iterable[str]) -> "FilterPredicate":
        """Build a predicate from ``key=value`` strings."""
        clauses = []
        for spec in specs:
            if "=" not in spec:
                raise ArgumentError(f"filter clause {spec!r} is not key=value")
            key, value = spec.split("=", 1)
            if not key:
                raise ArgumentError(f"filter clause {spec!r} has an empty key")
            clauses.append((key, value))
        return cls(tuple(clauses))

    def matches(self, morph: MorphEntry) -> bool:
        return all(morph.attributes.get(key) == value for key, value in self.clauses)

    def conjoin(self, other: "FilterPredicate") -> "FilterPredicate":
        return FilterPredicate(self.clauses + other.clauses)

    def describe(self) -> str:
        return ",".join(f"{k}={v}" for k, v in self.clauses)


def filter_dataset(ds: ScoreDataset, pred: FilterPredicate) -> ScoreDataset:
    """Restrict a dataset to the morphs matching a predicate.

    The probe count and FRS set are unchanged; selecting zero morphs is an
    error because every metric divides by the morph count.
    """
    kept = tuple(m for m in ds.morphs if pred.matches(m))
    if not kept:
        raise EmptySelectionError(
            f"filter [{pred.describe() or 'empty'}] matched no morphs"
        )
    kept_ids = {m.morph_id for m in kept}
    grid = {key: scores for key, scores in ds.grid.items() if key[0] in kept_ids}
    return ScoreDataset(kept, ds.frs_list, ds.probes_per_subject, grid)


def comparisons_to_csv(ds: ScoreDataset) -> str:
    """Serialize a dataset's grid back to the comparisons CSV format.

    Probe identifiers are positional (cells store ordered scores only), so
    parse -> assemble on the output reproduces an equal dataset.
    """
    width = len(str(ds.probes_per_subject))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COMPARISONS_HEADER)
    for morph in ds.morphs:
        for slot in range(1, morph.n_subjects + 1):
            for frs in ds.frs_list:
                for i, score in enumerate(ds.scores(morph.morph_id, slot, frs)):
                    writer.writerow(
                        [morph.morph_id, frs, slot, f"P{i + 1:0{width}d}", repr(score)]
                    )
    return buf.getvalue()


def morph_metadata_to_csv(morphs: Iterable[MorphEntry]) -> str:
    """Serialize morph entries to the metadata CSV format."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MORPHS_HEADER)
    for morph in morphs:
        attrs = ";".join(f"{k}={v}" for k, v in morph.attributes.items())
        writer.writerow([morph.morph_id, morph.n_subjects, attrs])
    return buf.getvalue()


def score_pools_to_csv(pools: Iterable[ScorePool]) -> str:
    """Serialize score pools to the two-column pool CSV format."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(POOL_HEADER)
    for pool in pools:
        for score in pool.scores:
            writer.writerow([pool.frs, repr(score)])
    return buf.getvalue()
