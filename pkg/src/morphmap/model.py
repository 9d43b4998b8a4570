"""Value types shared across the toolkit.

Everything in this module is an immutable container: ingestion constructs
instances, the metric and report layers only read them, so they are safe to
share between threads without synchronization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import (
    ArgumentError,
    CompletenessError,
    ConfigurationError,
    UnknownReferenceError,
    ValidationError,
)

FrsId = str
"""Face recognition system identifier; compared by exact string equality."""

GridKey = tuple[str, int, str]
"""(morph_id, subject slot, FRS id) index of one cell of probe scores."""

ACCEPT_ALL = float("-inf")
"""Threshold sentinel under which every finite similarity score matches.

Serialized as the string ``"accept-all"`` in threshold files; never produced
by calibration, only accepted as an explicit operator choice.
"""


def _require_finite(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{what} must be finite, got {value!r}")
    return value


def _format_keys(keys, limit: int = 8) -> str:
    keys = sorted(keys)
    shown = ", ".join(repr(k) for k in keys[:limit])
    if len(keys) > limit:
        shown += f", ... and {len(keys) - limit} more"
    return shown


class PoolKind(enum.Enum):
    """What a flat score pool represents."""

    NON_MATED = "non_mated"          # impostor comparisons, used for calibration
    BONA_FIDE_MATED = "bona_fide_mated"  # genuine comparisons, used for FNMR


@dataclass(frozen=True)
class ComparisonRecord:
    """One morph-versus-probe similarity score under one FRS.

    Scores are always similarities: dissimilarity inputs are negated at
    ingestion so a single strict-exceed decision rule applies everywhere.
    """

    morph_id: str
    frs: FrsId
    subject: int
    probe_id: str
    score: float

    def __post_init__(self):
        for name, value in (("morph_id", self.morph_id), ("frs", self.frs),
                            ("probe_id", self.probe_id)):
            if not value:
                raise ValidationError(f"comparison record {name} must be non-empty")
        if self.subject < 1:
            raise ValidationError(f"subject slot must be >= 1, got {self.subject}")
        object.__setattr__(self, "score", _require_finite(self.score, "score"))

    @property
    def key(self) -> tuple[str, str, int, str]:
        """Uniqueness key of this record within a dataset."""
        return (self.morph_id, self.frs, self.subject, self.probe_id)


@dataclass(frozen=True)
class MorphEntry:
    """A morphed image: its id, contributing-subject count, and metadata.

    Attribute values are opaque strings used only for equality filtering
    (e.g. ``format=digital``, ``alpha=0.5``, ``algorithm=C02``).
    """

    morph_id: str
    n_subjects: int
    attributes: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.morph_id:
            raise ValidationError("morph_id must be non-empty")
        if self.n_subjects < 2:
            raise ValidationError(
                f"morph {self.morph_id!r} needs at least 2 contributing subjects,"
                f" got {self.n_subjects}"
            )
        attrs = {}
        for key, value in dict(self.attributes).items():
            if not key:
                raise ValidationError(f"morph {self.morph_id!r} has an empty attribute key")
            if "=" in key or ";" in key:
                raise ValidationError(
                    f"attribute key {key!r} may not contain '=' or ';'"
                )
            if ";" in value:
                raise ValidationError(
                    f"attribute value {value!r} may not contain ';'"
                )
            attrs[str(key)] = str(value)
        object.__setattr__(self, "attributes", attrs)


@dataclass(frozen=True)
class ScoreDataset:
    """Validated grid of comparison scores.

    The grid is complete by construction: every (morph, subject slot, FRS)
    combination holds exactly ``probes_per_subject`` scores, ordered by probe
    id at assembly time. Construction raises a structured error otherwise,
    so a ``ScoreDataset`` instance is always internally consistent.

    ``frs_list`` order is stable for reproducible serialization but carries
    no meaning: every metric is a function of the FRS *set*.
    """

    morphs: tuple[MorphEntry, ...]
    frs_list: tuple[FrsId, ...]
    probes_per_subject: int
    grid: dict[GridKey, tuple[float, ...]]
    _by_id: dict[str, MorphEntry] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "morphs", tuple(self.morphs))
        object.__setattr__(self, "frs_list", tuple(self.frs_list))
        if self.probes_per_subject < 1:
            raise ValidationError(
                f"probes_per_subject must be >= 1, got {self.probes_per_subject}"
            )
        by_id: dict[str, MorphEntry] = {}
        for morph in self.morphs:
            if morph.morph_id in by_id:
                raise ValidationError(f"duplicate morph_id {morph.morph_id!r}")
            by_id[morph.morph_id] = morph
        seen_frs = set()
        for frs in self.frs_list:
            if not frs:
                raise ValidationError("FRS ids must be non-empty")
            if frs in seen_frs:
                raise ValidationError(f"duplicate FRS id {frs!r}")
            seen_frs.add(frs)

        grid = {}
        for key, scores in dict(self.grid).items():
            grid[key] = tuple(_require_finite(s, f"score in cell {key!r}") for s in scores)
        expected = {
            (morph.morph_id, slot, frs)
            for morph in self.morphs
            for slot in range(1, morph.n_subjects + 1)
            for frs in self.frs_list
        }
        missing = expected - grid.keys()
        if missing:
            raise CompletenessError(f"missing grid cells: {_format_keys(missing)}")
        extra = grid.keys() - expected
        if extra:
            raise CompletenessError(f"unexpected grid cells: {_format_keys(extra)}")
        wrong = {k for k, v in grid.items() if len(v) != self.probes_per_subject}
        if wrong:
            raise CompletenessError(
                f"cells without exactly {self.probes_per_subject} probe scores:"
                f" {_format_keys(wrong)}"
            )
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "_by_id", by_id)

    @property
    def morph_count(self) -> int:
        return len(self.morphs)

    @property
    def n_frs(self) -> int:
        return len(self.frs_list)

    def morph(self, morph_id: str) -> MorphEntry:
        try:
            return self._by_id[morph_id]
        except KeyError:
            raise UnknownReferenceError(f"unknown morph {morph_id!r}") from None

    def scores(self, morph_id: str, subject: int, frs: FrsId) -> tuple[float, ...]:
        """Probe scores of one grid cell, in stable (probe-id) order."""
        try:
            return self.grid[(morph_id, subject, frs)]
        except KeyError:
            raise UnknownReferenceError(
                f"no grid cell for morph {morph_id!r}, slot {subject}, FRS {frs!r}"
            ) from None


@dataclass(frozen=True)
class ScorePool:
    """Flat list of comparison scores for one FRS (non-mated or bona fide)."""

    frs: FrsId
    scores: tuple[float, ...]
    kind: PoolKind

    def __post_init__(self):
        if not self.frs:
            raise ValidationError("score pool FRS id must be non-empty")
        object.__setattr__(
            self, "scores",
            tuple(_require_finite(s, f"score in pool {self.frs!r}") for s in self.scores),
        )


@dataclass(frozen=True)
class ThresholdTable:
    """Per-FRS operational thresholds plus the FMR they were calibrated to."""

    entries: dict[FrsId, float]
    target_fmr: float

    def __post_init__(self):
        object.__setattr__(self, "target_fmr", float(self.target_fmr))
        if not (0.0 <= self.target_fmr <= 1.0):
            raise ValidationError(
                f"target_fmr must be in [0, 1], got {self.target_fmr!r}"
            )
        entries = {}
        for frs, tau in dict(self.entries).items():
            if not frs:
                raise ValidationError("threshold entry FRS id must be non-empty")
            tau = float(tau)
            if tau != ACCEPT_ALL and not math.isfinite(tau):
                raise ValidationError(
                    f"threshold for {frs!r} must be finite or ACCEPT_ALL, got {tau!r}"
                )
            entries[frs] = tau
        object.__setattr__(self, "entries", entries)

    def threshold_for(self, frs: FrsId) -> float:
        try:
            return self.entries[frs]
        except KeyError:
            raise ConfigurationError(f"no threshold configured for FRS {frs!r}") from None


@dataclass(frozen=True)
class MapMatrix:
    """Grid of attack-success proportions.

    ``values[r-1][c-1]`` is the proportion of morphs that reached a match
    decision against every contributing subject in at least ``r`` attempts
    under at least ``c`` FRSs. Indices are 1-based in the accessors, matching
    how the matrix is reported. Rows and columns are non-increasing because
    raising either requirement can only shrink the qualifying set.
    """

    values: tuple[tuple[float, ...], ...]
    morph_count: int

    def __post_init__(self):
        values = tuple(tuple(float(v) for v in row) for row in self.values)
        object.__setattr__(self, "values", values)
        if not values or not values[0]:
            raise ValidationError("matrix needs at least one row and one column")
        cols = len(values[0])
        if any(len(row) != cols for row in values):
            raise ValidationError("matrix rows must all have the same length")
        for r, row in enumerate(values):
            for c, v in enumerate(row):
                if not (0.0 <= v <= 1.0):
                    raise ValidationError(
                        f"cell [{r + 1},{c + 1}] = {v!r} is outside [0, 1]"
                    )
                if c > 0 and v > row[c - 1]:
                    raise ValidationError(
                        f"cell [{r + 1},{c + 1}] increases along its row"
                    )
                if r > 0 and v > values[r - 1][c]:
                    raise ValidationError(
                        f"cell [{r + 1},{c + 1}] increases down its column"
                    )
        if self.morph_count < 1:
            raise ValidationError(f"morph_count must be >= 1, got {self.morph_count}")

    @property
    def rows(self) -> int:
        return len(self.values)

    @property
    def cols(self) -> int:
        return len(self.values[0])

    def value(self, attempts: int, systems: int) -> float:
        """Cell lookup with 1-based (attempt count, FRS count) indices."""
        if not 1 <= attempts <= self.rows:
            raise ArgumentError(f"attempts must be in [1, {self.rows}], got {attempts}")
        if not 1 <= systems <= self.cols:
            raise ArgumentError(f"systems must be in [1, {self.cols}], got {systems}")
        return self.values[attempts - 1][systems - 1]
