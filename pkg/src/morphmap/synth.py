"""Synthetic score-file generation for demos and pipeline testing.

The score model is deliberately simple: one Gaussian location/spread per
FRS for each of the three pools (morph-vs-probe, non-mated, bona fide).
It exists to exercise the metrics end to end, not to model real FRS
behavior. Output is byte-deterministic for a given configuration.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field

from .errors import ArgumentError
from .ingest import COMPARISONS_HEADER, MORPHS_HEADER, POOL_HEADER


def _per_frs(values: tuple[float, ...], n: int, what: str) -> tuple[float, ...]:
    if any(not math.isfinite(v) for v in values):
        raise ArgumentError(f"{what} values must be finite")
    if len(values) == 1:
        return values * n
    if len(values) != n:
        raise ArgumentError(
            f"{what} needs 1 or {n} values, got {len(values)}"
        )
    return values


@dataclass(frozen=True)
class SynthConfig:
    """Shape and score model of a generated benchmark.

    Per-FRS model parameters accept either a single value (shared by all
    FRSs) or one value per FRS.
    """

    morph_count: int = 16
    subject_count: int = 2
    frs_count: int = 2
    probes_per_subject: int = 3
    seed: int = 0
    pool_size: int = 1000
    mated_mean: tuple[float, ...] = (0.8,)
    mated_spread: tuple[float, ...] = (0.1,)
    non_mated_mean: tuple[float, ...] = (0.1,)
    non_mated_spread: tuple[float, ...] = (0.1,)
    bona_fide_mean: tuple[float, ...] = (0.7,)
    bona_fide_spread: tuple[float, ...] = (0.15,)
    attributes: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.morph_count < 1:
            raise ArgumentError(f"morph_count must be >= 1, got {self.morph_count}")
        if self.subject_count < 2:
            raise ArgumentError(f"subject_count must be >= 2, got {self.subject_count}")
        if self.frs_count < 1:
            raise ArgumentError(f"frs_count must be >= 1, got {self.frs_count}")
        if self.probes_per_subject < 1:
            raise ArgumentError(
                f"probes_per_subject must be >= 1, got {self.probes_per_subject}"
            )
        if self.pool_size < 1:
            raise ArgumentError(f"pool_size must be >= 1, got {self.pool_size}")
        for key, values in self.attributes.items():
            if not key or not values:
                raise ArgumentError("attribute lists need a key and at least one value")
        n = self.frs_count
        for name in ("mated_mean", "mated_spread", "non_mated_mean",
                     "non_mated_spread", "bona_fide_mean", "bona_fide_spread"):
            values = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, _per_frs(values, n, name))
            if name.endswith("spread") and any(v < 0 for v in getattr(self, name)):
                raise ArgumentError(f"{name} values must be >= 0")

    @property
    def frs_ids(self) -> list[str]:
        return [f"FRS{i + 1:02d}" for i in range(self.frs_count)]

    @property
    def morph_ids(self) -> list[str]:
        return [f"M{i + 1:05d}" for i in range(self.morph_count)]


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def generate_files(config: SynthConfig) -> dict[str, str]:
    """Generate an ingestible file set: comparisons, metadata, both pools.

    Returns file name -> CSV text. Attribute values are assigned round-robin
    over the configured value lists, so every value list partitions the
    morph set.
    """
    rng = random.Random(config.seed)
    frs_ids = config.frs_ids

    comparison_rows = []
    for morph_id in config.morph_ids:
        for slot in range(1, config.subject_count + 1):
            for f, frs in enumerate(frs_ids):
                for p in range(config.probes_per_subject):
                    score = rng.gauss(config.mated_mean[f], config.mated_spread[f])
                    comparison_rows.append(
                        [morph_id, frs, slot, f"P{p + 1:03d}", f"{score:.6f}"]
                    )

    morph_rows = []
    for i, morph_id in enumerate(config.morph_ids):
        attrs = ";".join(
            f"{key}={values[i % len(values)]}"
            for key, values in config.attributes.items()
        )
        morph_rows.append([morph_id, config.subject_count, attrs])

    non_mated_rows = []
    for f, frs in enumerate(frs_ids):
        for _ in range(config.pool_size):
            score = rng.gauss(config.non_mated_mean[f], config.non_mated_spread[f])
            non_mated_rows.append([frs, f"{score:.6f}"])

    mated_rows = []
    for f, frs in enumerate(frs_ids):
        for _ in range(config.pool_size):
            score = rng.gauss(config.bona_fide_mean[f], config.bona_fide_spread[f])
            mated_rows.append([frs, f"{score:.6f}"])

    return {
        "comparisons.csv": _csv_text(COMPARISONS_HEADER, comparison_rows),
        "morphs.csv": _csv_text(MORPHS_HEADER, morph_rows),
        "non_mated.csv": _csv_text(POOL_HEADER, non_mated_rows),
        "mated.csv": _csv_text(POOL_HEADER, mated_rows),
    }
