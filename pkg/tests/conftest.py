"""Shared builders for the test suite."""

from __future__ import annotations

import random
from typing import NamedTuple

from morphmap import MorphEntry, ScoreDataset, ThresholdTable


def dataset_from_counts(counts, probes, frs_ids, tau=0.5):
    """Build (dataset, thresholds) realizing the given mated counts.

    counts: {morph_id: [per-subject {frs_id: mated_count}]}, list index is
    subject slot - 1. Each cell gets ``mated_count`` scores just above and
    the rest just below a shared threshold ``tau``.
    """
    morphs = tuple(MorphEntry(mid, len(slots)) for mid, slots in counts.items())
    grid = {}
    for mid, slots in counts.items():
        for i, per_frs in enumerate(slots, start=1):
            for frs in frs_ids:
                k = per_frs[frs]
                grid[(mid, i, frs)] = tuple(
                    [tau + 0.1] * k + [tau - 0.1] * (probes - k)
                )
    ds = ScoreDataset(morphs, tuple(frs_ids), probes, grid)
    thresholds = ThresholdTable(
        entries={frs: tau for frs in frs_ids}, target_fmr=0.001
    )
    return ds, thresholds


class Instance(NamedTuple):
    """A random dataset plus the raw pieces the naive oracle consumes."""

    ds: ScoreDataset
    thresholds: ThresholdTable
    morphs: list  # [(morph_id, n_subjects)]
    scores: dict  # (morph_id, slot, frs_id) -> [float]
    frs_ids: list
    probes: int


def random_instance(rng: random.Random, *, max_morphs=10, max_subjects=4,
                    max_frs=4, max_probes=5, n_frs=None, probes=None,
                    decimals=None) -> Instance:
    """Random small dataset with uniform scores and per-FRS thresholds.

    ``decimals`` coarsens all scores/thresholds to a decimal grid, which
    keeps strictly increasing transforms injective on the generated values.
    """
    n_morphs = rng.randint(2, max_morphs)
    n = n_frs if n_frs is not None else rng.randint(1, max_frs)
    m = probes if probes is not None else rng.randint(1, max_probes)
    frs_ids = [f"F{i}" for i in range(1, n + 1)]

    def draw():
        x = rng.uniform(-1.0, 1.0)
        return round(x, decimals) if decimals is not None else x

    morphs = []
    scores = {}
    for i in range(n_morphs):
        morph_id = f"M{i}"
        n_subjects = rng.randint(2, max_subjects)
        morphs.append((morph_id, n_subjects))
        for slot in range(1, n_subjects + 1):
            for frs in frs_ids:
                scores[(morph_id, slot, frs)] = [draw() for _ in range(m)]
    taus = {frs: draw() for frs in frs_ids}

    ds = ScoreDataset(
        tuple(MorphEntry(morph_id, k) for morph_id, k in morphs),
        tuple(frs_ids),
        m,
        {key: tuple(vals) for key, vals in scores.items()},
    )
    table = ThresholdTable(entries=taus, target_fmr=0.001)
    return Instance(ds, table, morphs, scores, frs_ids, m)
