"""Command-line front end: calibrate, evaluate, synth.

Calibration and evaluation are separate commands with a JSON threshold file
handed between them, so one calibration can be pinned across many stratified
evaluation runs.

Exit codes: 0 success, 1 data/validation error, 2 usage error. Every failure
prints a single ``error[<code>]: ...`` line on stderr.

If ``MORPHMAP_OUT_DIR`` is set, relative output paths are resolved under it.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import MorphmapError, ReadError, WriteError
from .ingest import (
    FilterPredicate,
    assemble_dataset,
    filter_dataset,
    parse_comparisons,
    parse_morph_metadata,
    parse_score_pool,
)
from .metrics import calibrate_threshold, compute_fmr
from .model import PoolKind, ThresholdTable
from .report import build_report, emit_report, thresholds_from_json, thresholds_to_json
from .synth import SynthConfig, generate_files

OUT_DIR_ENV = "MORPHMAP_OUT_DIR"


class UsageError(Exception):
    """Invalid command-line input; reported with exit code 2."""


def _resolve_out(path: str) -> Path:
    base = os.environ.get(OUT_DIR_ENV)
    resolved = Path(path)
    if base and not resolved.is_absolute():
        resolved = Path(base) / resolved
    return resolved


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise WriteError(f"cannot write {path}: {exc}") from None


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ReadError(f"cannot read {path}: {exc}") from None


def _parse_float_list(text: str, what: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must be a number or comma-separated numbers,"
                         f" got {text!r}") from None


def _cmd_calibrate(args) -> int:
    if not 0.0 <= args.target_fmr <= 1.0:
        raise UsageError(f"--target-fmr must be in [0, 1], got {args.target_fmr!r}")
    pools = parse_score_pool(
        _read_bytes(args.non_mated), PoolKind.NON_MATED,
        dissimilarity=args.dissimilarity,
    )
    entries = {}
    for pool in pools:
        tau = calibrate_threshold(pool, args.target_fmr)
        entries[pool.frs] = tau
        achieved = compute_fmr(pool, tau)
        print(f"{pool.frs}: threshold={tau!r} achieved_fmr={achieved!r}"
              f" (target {args.target_fmr!r}, {len(pool.scores)} non-mated scores)")
    table = ThresholdTable(entries=entries, target_fmr=args.target_fmr)
    out = _resolve_out(args.out)
    _write_text(out, thresholds_to_json(table))
    print(f"wrote {out}")
    return 0


def _cmd_evaluate(args) -> int:
    try:
        predicate = FilterPredicate.parse(args.filter or [])
    except MorphmapError as exc:
        raise UsageError(str(exc)) from None

    records = parse_comparisons(_read_bytes(args.scores),
                                dissimilarity=args.dissimilarity)
    morphs = parse_morph_metadata(_read_bytes(args.morphs))
    dataset = filter_dataset(assemble_dataset(records, morphs), predicate)
    thresholds = thresholds_from_json(_read_bytes(args.thresholds))
    mated_pools = None
    if args.mated:
        mated_pools = parse_score_pool(
            _read_bytes(args.mated), PoolKind.BONA_FIDE_MATED,
            dissimilarity=args.dissimilarity,
        )
    label = args.label if args.label is not None else Path(args.scores).stem
    report = build_report(
        dataset, thresholds,
        dataset_label=label,
        filter_description=predicate.describe(),
        mated_pools=mated_pools,
    )
    outputs = emit_report(report, args.format)
    out = _resolve_out(args.out)
    if len(outputs) == 1:
        targets = {out: next(iter(outputs.values()))}
    else:
        targets = {out / name: text for name, text in outputs.items()}
    for path, text in targets.items():
        _write_text(path, text)
        print(f"wrote {path}")
    return 0


def _cmd_synth(args) -> int:
    if args.subjects < 2:
        raise UsageError(f"--subjects must be >= 2, got {args.subjects}")
    for name in ("morphs", "frs", "probes", "pool_size"):
        if getattr(args, name) < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be >= 1,"
                             f" got {getattr(args, name)}")
    attributes = {}
    for spec in args.attr or []:
        if "=" not in spec:
            raise UsageError(f"--attr needs key=value1[,value2,...], got {spec!r}")
        key, values = spec.split("=", 1)
        if not key or not values:
            raise UsageError(f"--attr needs key=value1[,value2,...], got {spec!r}")
        if key in attributes:
            raise UsageError(f"--attr key {key!r} given twice")
        attributes[key] = tuple(values.split(","))
    config = SynthConfig(
        morph_count=args.morphs,
        subject_count=args.subjects,
        frs_count=args.frs,
        probes_per_subject=args.probes,
        seed=args.seed,
        pool_size=args.pool_size,
        mated_mean=_parse_float_list(args.mated_mean, "--mated-mean"),
        mated_spread=_parse_float_list(args.mated_spread, "--mated-spread"),
        non_mated_mean=_parse_float_list(args.non_mated_mean, "--non-mated-mean"),
        non_mated_spread=_parse_float_list(args.non_mated_spread, "--non-mated-spread"),
        bona_fide_mean=_parse_float_list(args.bona_fide_mean, "--bona-fide-mean"),
        bona_fide_spread=_parse_float_list(args.bona_fide_spread, "--bona-fide-spread"),
        attributes=attributes,
    )
    out_dir = _resolve_out(args.out_dir)
    for name, text in generate_files(config).items():
        path = out_dir / name
        _write_text(path, text)
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morphmap",
        description="Morphing-attack vulnerability metrics from face-recognition"
                    " similarity scores.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cal = sub.add_parser(
        "calibrate",
        help="calibrate per-FRS thresholds at a target FMR from non-mated scores",
    )
    cal.add_argument("--non-mated", required=True, metavar="PATH",
                     help="non-mated score pool CSV (frs_id,score)")
    cal.add_argument("--target-fmr", required=True, type=float, metavar="FMR",
                     help="target false match rate in [0, 1], e.g. 0.001")
    cal.add_argument("--out", required=True, metavar="PATH",
                     help="output threshold table (json)")
    cal.add_argument("--dissimilarity", action="store_true",
                     help="input scores are dissimilarities (negated at ingestion)")
    cal.set_defaults(func=_cmd_calibrate)

    ev = sub.add_parser(
        "evaluate",
        help="compute the attack-potential matrix and per-FRS indicators",
    )
    ev.add_argument("--scores", required=True, metavar="PATH",
                    help="comparisons CSV (morph_id,frs_id,subject_index,probe_id,score)")
    ev.add_argument("--morphs", required=True, metavar="PATH",
                    help="morph metadata CSV (morph_id,n_subjects,attributes)")
    ev.add_argument("--thresholds", required=True, metavar="PATH",
                    help="threshold table json from `morphmap calibrate`")
    ev.add_argument("--out", required=True, metavar="PATH",
                    help="output file (json/markdown) or directory (csv)")
    ev.add_argument("--filter", action="append", metavar="KEY=VALUE",
                    help="keep only morphs with this attribute value; repeatable,"
                         " clauses are ANDed")
    ev.add_argument("--mated", metavar="PATH",
                    help="bona fide mated score pool CSV; adds an FNMR section")
    ev.add_argument("--format", choices=["json", "markdown", "csv"], default="json",
                    help="output format (default: json)")
    ev.add_argument("--label", metavar="TEXT",
                    help="dataset label in the report (default: scores file stem)")
    ev.add_argument("--dissimilarity", action="store_true",
                    help="input scores are dissimilarities (negated at ingestion)")
    ev.set_defaults(func=_cmd_evaluate)

    syn = sub.add_parser(
        "synth",
        help="generate a deterministic synthetic file set for demos and tests",
    )
    syn.add_argument("--out-dir", required=True, metavar="DIR")
    syn.add_argument("--morphs", type=int, default=16, metavar="N")
    syn.add_argument("--subjects", type=int, default=2, metavar="N",
                     help="contributing subjects per morph (>= 2)")
    syn.add_argument("--frs", type=int, default=2, metavar="N")
    syn.add_argument("--probes", type=int, default=3, metavar="N",
                     help="probe images per subject")
    syn.add_argument("--seed", type=int, default=0, metavar="SEED")
    syn.add_argument("--pool-size", type=int, default=1000, metavar="N",
                     help="scores per FRS in each generated pool")
    syn.add_argument("--mated-mean", default="0.8", metavar="X[,X...]",
                     help="per-FRS mean of morph-vs-probe scores")
    syn.add_argument("--mated-spread", default="0.1", metavar="X[,X...]")
    syn.add_argument("--non-mated-mean", default="0.1", metavar="X[,X...]")
    syn.add_argument("--non-mated-spread", default="0.1", metavar="X[,X...]")
    syn.add_argument("--bona-fide-mean", default="0.7", metavar="X[,X...]")
    syn.add_argument("--bona-fide-spread", default="0.15", metavar="X[,X...]")
    syn.add_argument("--attr", action="append", metavar="KEY=V1[,V2...]",
                     help="attribute values assigned round-robin over morphs;"
                          " repeatable")
    syn.set_defaults(func=_cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help and flag syntax itself
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 2
    except MorphmapError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main())
