"""Morphing-attack vulnerability metrics from face-recognition similarity scores.

Computes the attack-potential matrix (proportion of morphs matching all
contributing subjects in at least r attempts under at least c FRSs) and its
per-FRS precursor indicators (MMPMR variants, FMMPMR), with threshold
calibration at a target FMR and FNMR measurement, from externally produced
score files.
"""

from .errors import (
    ArgumentError,
    CompletenessError,
    ConfigurationError,
    DuplicateKeyError,
    EmptyPoolError,
    EmptySelectionError,
    MorphmapError,
    ParseError,
    ReadError,
    UnknownReferenceError,
    ValidationError,
    WriteError,
)
from .ingest import (
    FilterPredicate,
    assemble_dataset,
    comparisons_to_csv,
    filter_dataset,
    morph_metadata_to_csv,
    parse_comparisons,
    parse_morph_metadata,
    parse_score_pool,
    score_pools_to_csv,
)
from .metrics import (
    IndicatorKind,
    MapCell,
    ScalarIndicator,
    calibrate_threshold,
    calibrate_thresholds,
    compute_fmr,
    compute_fnmr,
    compute_map_matrix,
    condition_holds,
    frs_match_count,
    indicator_rate,
    match_decision,
    mated_count,
    prodavg_mmpmr,
)
from .model import (
    ACCEPT_ALL,
    ComparisonRecord,
    FrsId,
    MapMatrix,
    MorphEntry,
    PoolKind,
    ScoreDataset,
    ScorePool,
    ThresholdTable,
)
from .report import (
    EvaluationReport,
    ScalarIndicators,
    build_report,
    emit_report,
    format_percent,
    parse_report,
    render_map_table,
    report_to_json,
    thresholds_from_json,
    thresholds_to_json,
)
from .synth import SynthConfig, generate_files

__version__ = "0.1.0"

__all__ = [
    "ACCEPT_ALL",
    "ArgumentError",
    "CompletenessError",
    "ComparisonRecord",
    "ConfigurationError",
    "DuplicateKeyError",
    "EmptyPoolError",
    "EmptySelectionError",
    "EvaluationReport",
    "FilterPredicate",
    "FrsId",
    "IndicatorKind",
    "MapCell",
    "MapMatrix",
    "MorphEntry",
    "MorphmapError",
    "ParseError",
    "PoolKind",
    "ReadError",
    "ScalarIndicator",
    "ScalarIndicators",
    "ScoreDataset",
    "ScorePool",
    "SynthConfig",
    "ThresholdTable",
    "UnknownReferenceError",
    "ValidationError",
    "WriteError",
    "assemble_dataset",
    "build_report",
    "calibrate_threshold",
    "calibrate_thresholds",
    "comparisons_to_csv",
    "compute_fmr",
    "compute_fnmr",
    "compute_map_matrix",
    "condition_holds",
    "emit_report",
    "filter_dataset",
    "format_percent",
    "frs_match_count",
    "generate_files",
    "indicator_rate",
    "match_decision",
    "mated_count",
    "morph_metadata_to_csv",
    "parse_comparisons",
    "parse_morph_metadata",
    "parse_report",
    "parse_score_pool",
    "prodavg_mmpmr",
    "render_map_table",
    "report_to_json",
    "score_pools_to_csv",
    "thresholds_from_json",
    "thresholds_to_json",
]
