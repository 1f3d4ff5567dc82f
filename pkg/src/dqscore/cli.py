"""Command-line interface: score, refit, mutate, similarity, label.

Exit codes: 0 success, 1 validation error (bad file contents, unreadable
path), 2 usage error (missing flag, bad flag value). A JSON config file
may supply any flag; explicit command-line flags win over the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import date
from pathlib import Path

from .config import Thresholds
from .errors import DQError, SchemaError, UsageError, ValidationError
from .ingredients import INGREDIENTS, compute_all
from .mutation import (
    MutationKind,
    MutationSpec,
    apply_mutation,
    parse_mutation_specs,
    run_monotonicity_suite,
    suite_report_to_json,
    suite_report_to_text,
)
from .report import (
    build_report,
    label_from_json,
    render_label,
    render_report,
)
from .scoring import WeightVector, refit_weights
from .tabular import (
    Codebook,
    parse_codebook,
    parse_dataset,
    parse_manifest,
    parse_reference_stats,
    serialize_codebook,
    serialize_dataset,
)
from .textsim import ALGORITHMS, hybrid_score, similarity_profile

_THRESHOLD_FLAGS = (
    "correlation_cutoff",
    "skew_saturation",
    "coupling_suggestion",
    "categorical_distinct_ratio",
    "categorical_distinct_count",
)


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read file {path}: {exc.strerror}") from None


def _write_bytes(path: str | None, payload: bytes) -> None:
    if path is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        try:
            Path(path).write_bytes(payload)
        except OSError as exc:
            raise ValidationError(
                f"cannot write file {path}: {exc.strerror}"
            ) from None


def _load_config(path: str | None, allowed: set[str]) -> dict:
    if path is None:
        return {}
    try:
        config = json.loads(_read_bytes(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise SchemaError("config file must be a JSON object")
    for key in config:
        if key not in allowed:
            raise SchemaError(f'unknown config key "{key}"')
    return config


def _get(args, config: dict, name: str, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return default


def _require(args, config: dict, name: str):
    value = _get(args, config, name)
    if value is None:
        raise UsageError(f"missing required flag --{name.replace('_', '-')}")
    return value


def _thresholds(args, config: dict) -> Thresholds:
    kwargs = {}
    for key in _THRESHOLD_FLAGS:
        value = _get(args, config, key)
        if value is not None:
            kwargs[key] = value
    return Thresholds(**kwargs)


def _weights(args, config: dict) -> WeightVector:
    path = _get(args, config, "weights")
    if path is None:
        return WeightVector.default()
    return WeightVector.from_json(_read_bytes(path))


def _today(args, config: dict) -> date | None:
    value = _get(args, config, "today")
    if value is None:
        return None
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise ValidationError(f"--today must be an ISO date, got {value!r}") from None


def _add_threshold_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--correlation-cutoff", type=float, dest="correlation_cutoff",
                     help="|r| at or above which a pair counts as correlated (default 0.8)")
    sub.add_argument("--skew-saturation", type=float, dest="skew_saturation",
                     help="|g1| at which the skew score reaches 0 (default 2.0)")
    sub.add_argument("--coupling-suggestion", type=float, dest="coupling_suggestion",
                     help="coupling below this triggers a suggestion (default 0.5)")
    sub.add_argument("--categorical-distinct-ratio", type=float,
                     dest="categorical_distinct_ratio",
                     help="distinct/non-missing ratio for continuous detection (default 0.5)")
    sub.add_argument("--categorical-distinct-count", type=int,
                     dest="categorical_distinct_count",
                     help="distinct count for continuous detection (default 20)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqscore",
        description="Data-quality scoring: nine weighted ingredients, a "
        "nutrition-style label and a comprehensive report.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    score = sub.add_parser("score", help="score a dataset and emit the report")
    score.add_argument("--data", help="dataset CSV (RFC 4180, header row)")
    score.add_argument("--codebook", help="codebook CSV (column,description,declared_type)")
    score.add_argument("--manifest", help="provenance manifest JSON")
    score.add_argument("--reference", help="reference statistics JSON")
    score.add_argument("--weights", help="weights JSON (default: built-in weights)")
    score.add_argument("--format", choices=("json", "text", "html"))
    score.add_argument("--out", help="output path (stdout when absent)")
    score.add_argument("--label-out", dest="label_out",
                       help="also write the quality label JSON to this path")
    score.add_argument("--config", help="JSON config file supplying any flag")
    score.add_argument("--today", help="evaluation date, ISO-8601 (default: today)")
    score.add_argument("--jobs", type=int, help="ingredient parallelism (default 1)")
    _add_threshold_flags(score)
    score.set_defaults(func=_cmd_score)

    refit = sub.add_parser("refit", help="refit weights from a training-matrix CSV")
    refit.add_argument("--training", help="CSV with the nine ingredient columns")
    refit.add_argument("--out", help="output path for the weights JSON")
    refit.add_argument("--config", help="JSON config file supplying any flag")
    refit.set_defaults(func=_cmd_refit)

    mutate = sub.add_parser("mutate", help="mutate a dataset or run the mutation suite")
    mutate.add_argument("--data", help="dataset CSV")
    mutate.add_argument("--codebook", help="codebook CSV")
    mutate.add_argument("--kind", choices=[k.value for k in MutationKind],
                        help="single mutation to apply")
    mutate.add_argument("--magnitude", type=float, help="mutation magnitude in [0, 1]")
    mutate.add_argument("--seed", type=int, help="RNG seed (default 0)")
    mutate.add_argument("--out-data", dest="out_data", help="path for the mutated CSV")
    mutate.add_argument("--out-codebook", dest="out_codebook",
                        help="path for the mutated codebook CSV")
    mutate.add_argument("--suite", help="JSON list of {kind, magnitude, seed}; "
                        "runs the monotonicity suite instead of a single mutation")
    mutate.add_argument("--manifest", help="provenance manifest JSON (suite baseline)")
    mutate.add_argument("--reference", help="reference statistics JSON (suite baseline)")
    mutate.add_argument("--weights", help="weights JSON (default: built-in weights)")
    mutate.add_argument("--format", choices=("json", "text"))
    mutate.add_argument("--out", help="suite report output path (stdout when absent)")
    mutate.add_argument("--config", help="JSON config file supplying any flag")
    mutate.add_argument("--today", help="evaluation date, ISO-8601 (default: today)")
    _add_threshold_flags(mutate)
    mutate.set_defaults(func=_cmd_mutate)

    similarity = sub.add_parser("similarity",
                                help="thirteen similarity scores plus the hybrid mean")
    similarity.add_argument("a", help="first string")
    similarity.add_argument("b", help="second string")
    similarity.add_argument("--format", choices=("json", "text"), default="json")
    similarity.set_defaults(func=_cmd_similarity)

    label = sub.add_parser("label", help="re-render a stored label JSON")
    label.add_argument("--label", help="label JSON produced by the score command")
    label.add_argument("--format", choices=("json", "text", "html"))
    label.add_argument("--out", help="output path (stdout when absent)")
    label.add_argument("--config", help="JSON config file supplying any flag")
    label.set_defaults(func=_cmd_label)

    return parser


_SCORE_CONFIG_KEYS = {
    "data", "codebook", "manifest", "reference", "weights", "format",
    "out", "label_out", "today", "jobs", *_THRESHOLD_FLAGS,
}
_MUTATE_CONFIG_KEYS = {
    "data", "codebook", "kind", "magnitude", "seed", "out_data",
    "out_codebook", "suite", "manifest", "reference", "weights", "format",
    "out", "today", *_THRESHOLD_FLAGS,
}


def _cmd_score(args) -> int:
    config = _load_config(args.config, _SCORE_CONFIG_KEYS)
    data_path = _require(args, config, "data")
    dataset = parse_dataset(_read_bytes(data_path), name=Path(data_path).stem)
    codebook_path = _get(args, config, "codebook")
    codebook = (
        parse_codebook(_read_bytes(codebook_path)) if codebook_path else None
    )
    manifest_path = _get(args, config, "manifest")
    manifest = (
        parse_manifest(_read_bytes(manifest_path)) if manifest_path else None
    )
    reference_path = _get(args, config, "reference")
    reference = (
        parse_reference_stats(_read_bytes(reference_path))
        if reference_path
        else None
    )
    weights = _weights(args, config)
    thresholds = _thresholds(args, config)
    jobs = int(_get(args, config, "jobs", 1))
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    vector, evidence = compute_all(
        dataset,
        codebook,
        manifest,
        reference,
        today=_today(args, config),
        thresholds=thresholds,
        jobs=jobs,
    )
    report = build_report(dataset, vector, evidence, weights, thresholds)
    fmt = _get(args, config, "format", "json")
    _write_bytes(_get(args, config, "out"), render_report(report, fmt))
    label_out = _get(args, config, "label_out")
    if label_out is not None:
        _write_bytes(label_out, render_label(report.label, "json"))
    return 0


def _parse_training_csv(data: bytes):
    text = data.decode("utf-8")
    rows = [r for r in csv.reader(io.StringIO(text, newline="")) if r]
    if not rows:
        raise ValidationError("training file is empty")
    header = tuple(h.strip() for h in rows[0])
    if header != INGREDIENTS:
        raise SchemaError(
            "training CSV header must be the nine ingredient names: "
            + ",".join(INGREDIENTS)
        )
    matrix = []
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != len(INGREDIENTS):
            raise ValidationError(
                f"training row {i} has {len(row)} fields, expected {len(INGREDIENTS)}"
            )
        try:
            matrix.append([float(v) for v in row])
        except ValueError:
            raise ValidationError(f"training row {i} has a non-numeric value") from None
    return matrix


def _cmd_refit(args) -> int:
    config = _load_config(args.config, {"training", "out"})
    training_path = _require(args, config, "training")
    matrix = _parse_training_csv(_read_bytes(training_path))
    weights, _loadings = refit_weights(matrix)
    _write_bytes(_get(args, config, "out"), weights.to_json().encode("utf-8"))
    return 0


def _cmd_mutate(args) -> int:
    config = _load_config(args.config, _MUTATE_CONFIG_KEYS)
    data_path = _require(args, config, "data")
    dataset = parse_dataset(_read_bytes(data_path), name=Path(data_path).stem)
    codebook_path = _get(args, config, "codebook")
    codebook = (
        parse_codebook(_read_bytes(codebook_path)) if codebook_path else None
    )
    thresholds = _thresholds(args, config)
    suite_path = _get(args, config, "suite")
    kind = _get(args, config, "kind")
    if suite_path is None and kind is None:
        raise UsageError("provide either --kind or --suite")

    if suite_path is not None:
        specs = parse_mutation_specs(_read_bytes(suite_path))
        manifest_path = _get(args, config, "manifest")
        manifest = (
            parse_manifest(_read_bytes(manifest_path)) if manifest_path else None
        )
        reference_path = _get(args, config, "reference")
        reference = (
            parse_reference_stats(_read_bytes(reference_path))
            if reference_path
            else None
        )
        suite = run_monotonicity_suite(
            dataset,
            codebook,
            manifest,
            reference,
            specs,
            _weights(args, config),
            thresholds=thresholds,
            today=_today(args, config),
        )
        fmt = _get(args, config, "format", "json")
        rendered = (
            suite_report_to_json(suite)
            if fmt == "json"
            else suite_report_to_text(suite)
        )
        _write_bytes(_get(args, config, "out"), rendered.encode("utf-8"))
        return 0

    magnitude = _require(args, config, "magnitude")
    spec = MutationSpec(
        kind=MutationKind(kind),
        magnitude=float(magnitude),
        seed=int(_get(args, config, "seed", 0)),
    )
    result = apply_mutation(
        dataset, codebook if codebook is not None else Codebook({}), spec, thresholds
    )
    if result.note:
        print(f"note: {result.note}", file=sys.stderr)
    _write_bytes(
        _get(args, config, "out_data"),
        serialize_dataset(result.dataset).encode("utf-8"),
    )
    out_codebook = _get(args, config, "out_codebook")
    if out_codebook is not None:
        _write_bytes(out_codebook, serialize_codebook(result.codebook).encode("utf-8"))
    return 0


def _cmd_similarity(args) -> int:
    profile = similarity_profile(args.a, args.b)
    hybrid = hybrid_score(args.a, args.b)
    if args.format == "json":
        payload = {
            "a": args.a,
            "b": args.b,
            "scores": {alg: profile[alg] for alg in ALGORITHMS},
            "hybrid": hybrid,
        }
        output = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"{alg:<20}{profile[alg]:8.4f}" for alg in ALGORITHMS]
        lines.append(f"{'hybrid':<20}{hybrid:8.4f}")
        output = "\n".join(lines) + "\n"
    sys.stdout.write(output)
    return 0


def _cmd_label(args) -> int:
    config = _load_config(args.config, {"label", "format", "out"})
    label_path = _require(args, config, "label")
    label = label_from_json(_read_bytes(label_path))
    fmt = _get(args, config, "format", "text")
    _write_bytes(_get(args, config, "out"), render_label(label, fmt))
    return 0


def run(argv=None) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DQError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
