"""Vulnerability metrics over validated score datasets.

The single decision rule everywhere: a verification attempt succeeds when
its similarity score strictly exceeds the FRS threshold. A score equal to
the threshold is a non-match, and FNMR counts it as such. Because every
metric only counts threshold exceedances, all results are invariant under
probe/FRS reordering and under any strictly increasing rescoring applied
together with threshold recalibration.

All functions are pure over immutable inputs; evaluation can be spread over
morphs or matrix cells in any order without changing results.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from math import isfinite

from .errors import ArgumentError, ConfigurationError, EmptyPoolError, EmptySelectionError
from .model import (
    FrsId,
    MapMatrix,
    MorphEntry,
    PoolKind,
    ScoreDataset,
    ScorePool,
    ThresholdTable,
)


class ScalarIndicator(enum.Enum):
    """Per-FRS boolean-condition indicators reported alongside the matrix."""

    MMPMR = "mmpmr"                  # single probe per subject (requires one attempt)
    MINMAX_MMPMR = "minmax_mmpmr"    # at least one successful attempt per subject
    FMMPMR = "fmmpmr"                # every attempt successful for every subject


@dataclass(frozen=True)
class MapCell:
    """One matrix condition: >= min_attempts successes under >= min_systems FRSs."""

    min_attempts: int
    min_systems: int


IndicatorKind = ScalarIndicator | MapCell


def match_decision(score: float, threshold: float) -> int:
    """1 if the score strictly exceeds the threshold, else 0.

    ``ACCEPT_ALL`` as threshold accepts every finite score.
    """
    return 1 if score > threshold else 0


def mated_count(ds: ScoreDataset, thresholds: ThresholdTable,
                morph_id: str, subject: int, frs: FrsId) -> int:
    """Number of a subject's probes that match the morph under one FRS."""
    tau = thresholds.threshold_for(frs)
    return sum(1 for s in ds.scores(morph_id, subject, frs) if s > tau)


def frs_match_count(ds: ScoreDataset, thresholds: ThresholdTable,
                    morph_id: str, subject: int, min_attempts: int) -> int:
    """Number of FRSs granting at least ``min_attempts`` successes for a subject."""
    if not 1 <= min_attempts <= ds.probes_per_subject:
        raise ArgumentError(
            f"min_attempts must be in [1, {ds.probes_per_subject}],"
            f" got {min_attempts}"
        )
    return sum(
        1 for frs in ds.frs_list
        if mated_count(ds, thresholds, morph_id, subject, frs) >= min_attempts
    )


def _require_designated_frs(ds: ScoreDataset, frs: FrsId | None) -> FrsId:
    if frs is None:
        raise ConfigurationError("this indicator needs a designated FRS")
    if frs not in ds.frs_list:
        raise ConfigurationError(f"FRS {frs!r} is not part of the dataset")
    return frs


def condition_holds(kind, ds: ScoreDataset, thresholds: ThresholdTable,
                    morph: MorphEntry, frs: FrsId | None = None) -> bool:
    """Evaluate one indicator's per-morph condition.

    Every indicator is a conjunction over all contributing subjects of a
    kind-specific clause; a morph only counts when *all* subjects pass.
    Scalar indicators are per-FRS and need ``frs``; a ``MapCell`` uses the
    whole FRS set and ignores it.
    """
    if isinstance(kind, MapCell):
        r, c = kind.min_attempts, kind.min_systems
        if not 1 <= r <= ds.probes_per_subject:
            raise ArgumentError(
                f"min_attempts must be in [1, {ds.probes_per_subject}], got {r}"
            )
        if not 1 <= c <= ds.n_frs:
            raise ArgumentError(f"min_systems must be in [1, {ds.n_frs}], got {c}")
        return all(
            frs_match_count(ds, thresholds, morph.morph_id, slot, r) >= c
            for slot in range(1, morph.n_subjects + 1)
        )

    frs = _require_designated_frs(ds, frs)
    if kind is ScalarIndicator.MMPMR and ds.probes_per_subject != 1:
        raise ArgumentError(
            "single-probe MMPMR needs exactly one probe per subject;"
            f" this dataset has {ds.probes_per_subject}"
        )
    counts = [
        mated_count(ds, thresholds, morph.morph_id, slot, frs)
        for slot in range(1, morph.n_subjects + 1)
    ]
    if kind is ScalarIndicator.MMPMR:
        return all(count == 1 for count in counts)
    if kind is ScalarIndicator.MINMAX_MMPMR:
        return all(count >= 1 for count in counts)
    if kind is ScalarIndicator.FMMPMR:
        return all(count == ds.probes_per_subject for count in counts)
    raise ArgumentError(f"unknown indicator kind {kind!r}")


def indicator_rate(kind, ds: ScoreDataset, thresholds: ThresholdTable,
                   frs: FrsId | None = None) -> float:
    """Proportion of morphs whose condition holds."""
    if not ds.morphs:
        raise EmptySelectionError("dataset contains no morphs")
    hits = sum(1 for morph in ds.morphs if condition_holds(kind, ds, thresholds, morph, frs))
    return hits / ds.morph_count


def prodavg_mmpmr(ds: ScoreDataset, thresholds: ThresholdTable, frs: FrsId) -> float:
    """Probabilistic MMPMR: mean over morphs of the per-subject product of
    acceptance proportions.

    This is an expectation, not a boolean per-morph condition, so it is the
    one indicator not expressed through ``condition_holds``. It is bounded
    below by the FMMPMR rate (product is 1 exactly when every attempt
    succeeds) and above by the MinMax rate (product is 0 exactly when some
    subject never succeeds).
    """
    if not ds.morphs:
        raise EmptySelectionError("dataset contains no morphs")
    frs = _require_designated_frs(ds, frs)
    m = ds.probes_per_subject
    total = 0.0
    for morph in ds.morphs:
        product = 1.0
        for slot in range(1, morph.n_subjects + 1):
            product *= mated_count(ds, thresholds, morph.morph_id, slot, frs) / m
        total += product
    return total / ds.morph_count


def compute_map_matrix(ds: ScoreDataset, thresholds: ThresholdTable) -> MapMatrix:
    """Assemble the full attack-potential matrix.

    Cell (r, c) holds the proportion of morphs for which every contributing
    subject reaches at least r successful attempts under at least c FRSs.
    Rows grow the attempt requirement (robustness of the attack), columns
    the number of systems fooled (generality).
    """
    if not ds.morphs:
        raise EmptySelectionError("dataset contains no morphs")
    if not ds.frs_list:
        raise EmptySelectionError("dataset contains no FRSs")
    m = ds.probes_per_subject
    n = ds.n_frs
    taus = [thresholds.threshold_for(frs) for frs in ds.frs_list]

    counts = [[0] * n for _ in range(m)]
    for morph in ds.morphs:
        per_subject = [
            [
                sum(1 for s in ds.scores(morph.morph_id, slot, frs) if s > tau)
                for frs, tau in zip(ds.frs_list, taus)
            ]
            for slot in range(1, morph.n_subjects + 1)
        ]
        for r in range(1, m + 1):
            # min over subjects of the number of FRSs reaching r successes:
            # the morph satisfies cell (r, c) for every c up to that minimum
            agreeing = min(
                sum(1 for count in row if count >= r) for row in per_subject
            )
            for c in range(agreeing):
                counts[r - 1][c] += 1

    total = ds.morph_count
    values = tuple(
        tuple(counts[r][c] / total for c in range(n)) for r in range(m)
    )
    return MapMatrix(values=values, morph_count=total)


def _require_pool(pool: ScorePool, kind: PoolKind, purpose: str) -> None:
    if pool.kind is not kind:
        raise ArgumentError(
            f"{purpose} needs a {kind.value} pool, got {pool.kind.value}"
        )
    if not pool.scores:
        raise EmptyPoolError(f"score pool for FRS {pool.frs!r} is empty")


def compute_fmr(pool: ScorePool, threshold: float) -> float:
    """False match rate of a non-mated pool at a threshold."""
    _require_pool(pool, PoolKind.NON_MATED, "FMR computation")
    return sum(1 for s in pool.scores if s > threshold) / len(pool.scores)


def compute_fnmr(pool: ScorePool, threshold: float) -> float:
    """False non-match rate of a bona fide mated pool at a threshold.

    Equality with the threshold is a non-match, mirroring the strict match
    rule.
    """
    _require_pool(pool, PoolKind.BONA_FIDE_MATED, "FNMR computation")
    return sum(1 for s in pool.scores if not s > threshold) / len(pool.scores)


def calibrate_threshold(pool: ScorePool, target_fmr: float) -> float:
    """Smallest observed non-mated score whose FMR does not exceed the target.

    Candidates are restricted to observed pool values (an empirical,
    lower-inclusive quantile): calibration is reproducible from the pool
    alone and minimality is exactly testable. The maximum observed score
    always qualifies (FMR 0), so a result always exists.
    """
    if not isfinite(target_fmr) or not 0.0 <= target_fmr <= 1.0:
        raise ArgumentError(f"target_fmr must be in [0, 1], got {target_fmr!r}")
    _require_pool(pool, PoolKind.NON_MATED, "threshold calibration")
    ordered = sorted(pool.scores)
    n = len(ordered)
    i = 0
    while i < n:
        candidate = ordered[i]
        after = bisect_right(ordered, candidate)
        if (n - after) / n <= target_fmr:
            return candidate
        i = after
    raise AssertionError("unreachable: max observed score yields FMR 0")


def calibrate_thresholds(pools: list[ScorePool], target_fmr: float) -> ThresholdTable:
    """Calibrate one threshold per FRS pool into a threshold table."""
    if not pools:
        raise EmptyPoolError("no calibration pools given")
    entries: dict[str, float] = {}
    for pool in pools:
        if pool.frs in entries:
            raise ArgumentError(f"duplicate calibration pool for FRS {pool.frs!r}")
        entries[pool.frs] = calibrate_threshold(pool, target_fmr)
    return ThresholdTable(entries=entries, target_fmr=target_fmr)
