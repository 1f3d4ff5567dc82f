"""Seeded noise-injection / cleaning mutations and the monotonicity suite.

Each mutation is deterministic given its seed and touches exactly one
aspect of the data; the suite applies a list of mutations, rescored against
the baseline, and checks that noise lowers the DQ score while cleaning
never does. Dose-response holds by construction: for a fixed seed the
cells picked at a lower magnitude are a subset of those picked at a
higher one.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from datetime import date
from enum import Enum

import numpy as np

from .config import DEFAULT_THRESHOLDS, Thresholds
from .errors import DegenerateInputError, SchemaError, ValidationError
from .ingredients import compute_all, duplicate_score, pairwise_pearson
from .scoring import WeightVector, dq_score
from .tabular import (
    CellKind,
    Codebook,
    CodebookEntry,
    Column,
    Dataset,
    NUMERIC_KINDS,
    ProvenanceManifest,
    ReferenceStats,
)


class MutationKind(Enum):
    # noise: lowers quality
    INJECT_MISSING = "inject_missing"
    INJECT_DUPLICATES = "inject_duplicates"
    INJECT_CORRELATED_COLUMN = "inject_correlated_column"
    INJECT_SKEW = "inject_skew"
    DEGRADE_METADATA = "degrade_metadata"
    CORRUPT_CELL_TYPES = "corrupt_cell_types"
    # clean: restores quality
    REMOVE_MISSING_ROWS = "remove_missing_rows"
    DEDUPLICATE = "deduplicate"
    DROP_HIGH_CORRELATION_COLUMNS = "drop_high_correlation_columns"
    IMPROVE_METADATA = "improve_metadata"


NOISE_KINDS = frozenset(
    {
        MutationKind.INJECT_MISSING,
        MutationKind.INJECT_DUPLICATES,
        MutationKind.INJECT_CORRELATED_COLUMN,
        MutationKind.INJECT_SKEW,
        MutationKind.DEGRADE_METADATA,
        MutationKind.CORRUPT_CELL_TYPES,
    }
)
CLEAN_KINDS = frozenset(MutationKind) - NOISE_KINDS

#: The ingredient each mutation aims at.
TARGET_INGREDIENT = {
    MutationKind.INJECT_MISSING: "non_missing",
    MutationKind.INJECT_DUPLICATES: "non_duplicate",
    MutationKind.INJECT_CORRELATED_COLUMN: "un_correlation",
    MutationKind.INJECT_SKEW: "un_skewness",
    MutationKind.DEGRADE_METADATA: "metadata_coupling",
    MutationKind.CORRUPT_CELL_TYPES: "uniformity",
    MutationKind.REMOVE_MISSING_ROWS: "non_missing",
    MutationKind.DEDUPLICATE: "non_duplicate",
    MutationKind.DROP_HIGH_CORRELATION_COLUMNS: "un_correlation",
    MutationKind.IMPROVE_METADATA: "metadata_coupling",
}

#: Ingredients a mutation may move as an arithmetic side effect (e.g.
#: blanking cells also shrinks the correlation sample). Everything not
#: listed here and not the target must stay at its baseline value.
ENTANGLED_INGREDIENTS = {
    MutationKind.INJECT_MISSING: (
        "uniformity",
        "dataset_characteristics",
        "non_duplicate",
        "un_skewness",
        "categorical_consistency",
        "un_correlation",
    ),
    MutationKind.INJECT_DUPLICATES: (
        "uniformity",
        "dataset_characteristics",
        "non_missing",
        "un_skewness",
        "categorical_consistency",
        "un_correlation",
    ),
    MutationKind.INJECT_CORRELATED_COLUMN: (
        "uniformity",
        "dataset_characteristics",
        "metadata_coupling",
        "non_missing",
        "non_duplicate",
        "un_skewness",
        "categorical_consistency",
    ),
    MutationKind.INJECT_SKEW: (
        "dataset_characteristics",
        "non_duplicate",
        "categorical_consistency",
        "un_correlation",
    ),
    MutationKind.DEGRADE_METADATA: (),
    MutationKind.CORRUPT_CELL_TYPES: (
        "dataset_characteristics",
        "non_duplicate",
        "un_skewness",
        "categorical_consistency",
        "un_correlation",
    ),
    MutationKind.REMOVE_MISSING_ROWS: (
        "uniformity",
        "dataset_characteristics",
        "non_duplicate",
        "un_skewness",
        "categorical_consistency",
        "un_correlation",
    ),
    MutationKind.DEDUPLICATE: (
        "uniformity",
        "dataset_characteristics",
        "non_missing",
        "un_skewness",
        "categorical_consistency",
        "un_correlation",
    ),
    MutationKind.DROP_HIGH_CORRELATION_COLUMNS: (
        "uniformity",
        "dataset_characteristics",
        "metadata_coupling",
        "non_missing",
        "non_duplicate",
        "un_skewness",
        "categorical_consistency",
    ),
    MutationKind.IMPROVE_METADATA: (),
}

CORRUPTION_TOKEN = "corrupted"


@dataclass(frozen=True)
class MutationSpec:
    kind: MutationKind
    magnitude: float
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.magnitude <= 1.0:
            raise ValidationError(
                f"mutation magnitude must be in [0, 1], got {self.magnitude}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class MutationResult:
    dataset: Dataset
    codebook: Codebook
    changed: bool
    note: str | None = None


def parse_mutation_specs(data) -> list[MutationSpec]:
    """Parse a JSON array of {kind, magnitude, seed} objects."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        rows = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"mutation specs are not valid JSON: {exc}") from None
    if not isinstance(rows, list):
        raise SchemaError("mutation specs must be a JSON array")
    specs = []
    for i, row in enumerate(rows):
        if not isinstance(row, dict) or set(row) != {"kind", "magnitude", "seed"}:
            raise SchemaError(
                f"spec {i} must be an object with kind, magnitude and seed"
            )
        try:
            kind = MutationKind(row["kind"])
        except ValueError:
            raise SchemaError(f'spec {i}: unknown mutation kind "{row["kind"]}"') from None
        magnitude = row["magnitude"]
        if isinstance(magnitude, bool) or not isinstance(magnitude, (int, float)):
            raise SchemaError(f"spec {i}: magnitude must be a number")
        seed = row["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise SchemaError(f"spec {i}: seed must be an integer")
        specs.append(MutationSpec(kind=kind, magnitude=float(magnitude), seed=seed))
    return specs


# --------------------------------------------------------------------------
# Mutation mechanics


def _cell_matrix(dataset: Dataset) -> list[list[str]]:
    return [list(col.cells) for col in dataset.columns]


def _rebuild(
    dataset: Dataset, names: list[str], cells_by_col: list[list[str]]
) -> Dataset:
    columns = tuple(
        Column.build(name, cells, dataset.missing_tokens)
        for name, cells in zip(names, cells_by_col)
    )
    return Dataset(
        name=dataset.name, columns=columns, missing_tokens=dataset.missing_tokens
    )


def _format_value(value: float) -> str:
    return repr(float(value))


def _inject_missing(dataset, rng, magnitude):
    total = dataset.row_count * len(dataset.columns)
    count = math.floor(magnitude * total)
    if count == 0:
        return None, "magnitude selects zero cells"
    candidates = [
        (ci, ri)
        for ci, col in enumerate(dataset.columns)
        for ri, kind in enumerate(col.kinds)
        if kind is not CellKind.MISSING
    ]
    if not candidates:
        return None, "no non-missing cells left to blank"
    rng.shuffle(candidates)
    note = None
    if count > len(candidates):
        note = (
            f"only {len(candidates)} non-missing cells available, "
            f"requested {count}"
        )
        count = len(candidates)
    cells = _cell_matrix(dataset)
    for ci, ri in candidates[:count]:
        cells[ci][ri] = ""
    return _rebuild(dataset, list(dataset.column_names), cells), note


def _inject_duplicates(dataset, rng, magnitude):
    count = math.floor(magnitude * dataset.row_count)
    if count == 0:
        return None, "magnitude selects zero rows"
    rows = list(dataset.iter_rows())
    chosen = [rng.randrange(dataset.row_count) for _ in range(count)]
    cells = _cell_matrix(dataset)
    for index in chosen:
        for ci, cell in enumerate(rows[index]):
            cells[ci].append(cell)
    return _rebuild(dataset, list(dataset.column_names), cells), None


def _pick_numeric_column(dataset, rng):
    numeric = [c for c in dataset.columns if c.is_numeric]
    if not numeric:
        return None
    return numeric[rng.randrange(len(numeric))]


def _inject_correlated_column(dataset, rng, magnitude):
    source = _pick_numeric_column(dataset, rng)
    if source is None:
        return None, "no numeric column to correlate with"
    sigma = float(np.std(source.numeric_cell_values))
    amplitude = (1.0 - magnitude) * sigma
    new_cells = []
    for cell, kind in zip(source.cells, source.kinds):
        if kind is CellKind.MISSING:
            new_cells.append(cell)
        else:
            noisy = float(cell) + rng.uniform(-amplitude, amplitude)
            new_cells.append(_format_value(noisy))
    existing = set(dataset.column_names)
    new_name = f"{source.name}_corr"
    suffix = 2
    while new_name in existing:
        new_name = f"{source.name}_corr{suffix}"
        suffix += 1
    cells = _cell_matrix(dataset)
    cells.append(new_cells)
    names = list(dataset.column_names) + [new_name]
    return _rebuild(dataset, names, cells), None


def _inject_skew(dataset, rng, magnitude):
    source = _pick_numeric_column(dataset, rng)
    if source is None:
        return None, "no numeric column to skew"
    values = source.numeric_cell_values
    low, high = float(values.min()), float(values.max())
    if high == low:
        return None, f"column {source.name!r} is constant"
    exponent = 1.0 + 4.0 * magnitude
    span = high - low
    index = list(dataset.column_names).index(source.name)
    cells = _cell_matrix(dataset)
    for ri, (cell, kind) in enumerate(zip(source.cells, source.kinds)):
        if kind is CellKind.MISSING:
            continue
        normalized = (float(cell) - low) / span
        cells[index][ri] = _format_value(low + span * normalized**exponent)
    return _rebuild(dataset, list(dataset.column_names), cells), None


def _corrupt_cell_types(dataset, rng, magnitude):
    candidates = [
        (ci, ri)
        for ci, col in enumerate(dataset.columns)
        for ri, kind in enumerate(col.kinds)
        if kind in NUMERIC_KINDS
    ]
    count = math.floor(magnitude * len(candidates))
    if count == 0:
        return None, "magnitude selects zero numeric cells"
    rng.shuffle(candidates)
    cells = _cell_matrix(dataset)
    for ci, ri in candidates[:count]:
        cells[ci][ri] = CORRUPTION_TOKEN
    return _rebuild(dataset, list(dataset.column_names), cells), None


def _remove_missing_rows(dataset, rng, magnitude):
    rows_with_missing = sorted(
        {
            ri
            for col in dataset.columns
            for ri, kind in enumerate(col.kinds)
            if kind is CellKind.MISSING
        }
    )
    if not rows_with_missing:
        return None, "no rows contain missing cells"
    count = math.floor(magnitude * len(rows_with_missing))
    if count == 0:
        return None, "magnitude selects zero rows"
    rng.shuffle(rows_with_missing)
    doomed = set(rows_with_missing[:count])
    cells = [
        [cell for ri, cell in enumerate(col.cells) if ri not in doomed]
        for col in dataset.columns
    ]
    return _rebuild(dataset, list(dataset.column_names), cells), None


def _deduplicate(dataset, rng, magnitude):
    _, detail = duplicate_score(dataset)
    duplicate_rows = [dup for dup, _ in detail.rows]
    if not duplicate_rows:
        return None, "dataset has no duplicate rows"
    count = math.floor(magnitude * len(duplicate_rows))
    if count == 0:
        return None, "magnitude selects zero rows"
    rng.shuffle(duplicate_rows)
    doomed = set(duplicate_rows[:count])
    cells = [
        [cell for ri, cell in enumerate(col.cells) if ri not in doomed]
        for col in dataset.columns
    ]
    return _rebuild(dataset, list(dataset.column_names), cells), None


def _drop_high_correlation_columns(dataset, rng, magnitude, cutoff):
    names, r, _ = pairwise_pearson(dataset)
    if len(names) < 2:
        return None, "fewer than 2 numeric columns"
    order = {name: i for i, name in enumerate(dataset.column_names)}
    high_pairs = [
        (names[j], names[k], float(r[j, k]))
        for j in range(len(names))
        for k in range(j + 1, len(names))
        if abs(r[j, k]) >= cutoff
    ]
    if not high_pairs:
        return None, "no highly correlated column pairs"
    high_pairs.sort(key=lambda p: (-abs(p[2]), p[0], p[1]))
    victims: list[str] = []
    taken = set()
    for a, b, _ in high_pairs:
        if a in taken or b in taken:
            continue
        victim = a if order[a] > order[b] else b
        victims.append(victim)
        taken.add(victim)
    count = math.floor(magnitude * len(victims))
    if count == 0:
        return None, "magnitude selects zero columns"
    rng.shuffle(victims)
    doomed = set(victims[:count])
    keep = [name for name in dataset.column_names if name not in doomed]
    cells = [
        list(dataset.column(name).cells) for name in keep
    ]
    return _rebuild(dataset, keep, cells), None


def _degrade_metadata(codebook, rng, magnitude):
    names = list(codebook.entries)
    count = math.floor(magnitude * len(names))
    if not names:
        return None, "codebook has no entries"
    if count == 0:
        return None, "magnitude selects zero entries"
    rng.shuffle(names)
    entries = dict(codebook.entries)
    changed = False
    for name in names[:count]:
        entry = entries[name]
        words = entry.description.split()
        truncated = words[0] if words else entry.description
        if truncated != entry.description:
            entries[name] = CodebookEntry(truncated, entry.declared_type)
            changed = True
    if not changed:
        return None, "selected descriptions already have a single token"
    return Codebook(entries), None


def _improve_metadata(codebook, rng, magnitude):
    names = list(codebook.entries)
    count = math.floor(magnitude * len(names))
    if not names:
        return None, "codebook has no entries"
    if count == 0:
        return None, "magnitude selects zero entries"
    rng.shuffle(names)
    entries = dict(codebook.entries)
    for name in names[:count]:
        entry = entries[name]
        improved = f"{name} {entry.description}".strip()
        entries[name] = CodebookEntry(improved, entry.declared_type)
    return Codebook(entries), None


def apply_mutation(
    dataset: Dataset,
    codebook: Codebook,
    spec: MutationSpec,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> MutationResult:
    """Apply one seeded mutation; identical inputs yield identical outputs.

    Mutations that cannot act (no material, zero magnitude) return the
    inputs unchanged with ``changed=False`` and an explanatory note.
    """
    rng = random.Random(spec.seed)
    if spec.magnitude == 0.0:
        return MutationResult(dataset, codebook, False, "magnitude is zero")

    kind = spec.kind
    new_dataset, new_codebook = None, None
    if kind is MutationKind.INJECT_MISSING:
        new_dataset, note = _inject_missing(dataset, rng, spec.magnitude)
    elif kind is MutationKind.INJECT_DUPLICATES:
        new_dataset, note = _inject_duplicates(dataset, rng, spec.magnitude)
    elif kind is MutationKind.INJECT_CORRELATED_COLUMN:
        new_dataset, note = _inject_correlated_column(dataset, rng, spec.magnitude)
    elif kind is MutationKind.INJECT_SKEW:
        new_dataset, note = _inject_skew(dataset, rng, spec.magnitude)
    elif kind is MutationKind.CORRUPT_CELL_TYPES:
        new_dataset, note = _corrupt_cell_types(dataset, rng, spec.magnitude)
    elif kind is MutationKind.REMOVE_MISSING_ROWS:
        new_dataset, note = _remove_missing_rows(dataset, rng, spec.magnitude)
    elif kind is MutationKind.DEDUPLICATE:
        new_dataset, note = _deduplicate(dataset, rng, spec.magnitude)
    elif kind is MutationKind.DROP_HIGH_CORRELATION_COLUMNS:
        new_dataset, note = _drop_high_correlation_columns(
            dataset, rng, spec.magnitude, thresholds.correlation_cutoff
        )
    elif kind is MutationKind.DEGRADE_METADATA:
        new_codebook, note = _degrade_metadata(codebook, rng, spec.magnitude)
    elif kind is MutationKind.IMPROVE_METADATA:
        new_codebook, note = _improve_metadata(codebook, rng, spec.magnitude)
    else:  # pragma: no cover - exhaustive enum
        raise ValidationError(f"unhandled mutation kind {kind}")

    changed = new_dataset is not None or new_codebook is not None
    return MutationResult(
        dataset=new_dataset if new_dataset is not None else dataset,
        codebook=new_codebook if new_codebook is not None else codebook,
        changed=changed,
        note=note,
    )


# --------------------------------------------------------------------------
# Monotonicity suite


@dataclass(frozen=True)
class SuiteEntry:
    kind: str
    magnitude: float
    seed: int
    group: str  # "noise" or "clean"
    verdict: str  # PASS / FAIL / SKIP
    dq_score: float | None
    delta: float | None
    note: str | None
    entangled: tuple[str, ...]


@dataclass(frozen=True)
class SuiteReport:
    baseline_dq: float
    baseline_ingredients: dict[str, float | None]
    entries: tuple[SuiteEntry, ...]

    @property
    def passed(self) -> int:
        return sum(e.verdict == "PASS" for e in self.entries)

    @property
    def failed(self) -> int:
        return sum(e.verdict == "FAIL" for e in self.entries)

    @property
    def skipped(self) -> int:
        return sum(e.verdict == "SKIP" for e in self.entries)


_STRICT_EPS = 1e-9


def run_monotonicity_suite(
    dataset: Dataset,
    codebook: Codebook | None,
    manifest: ProvenanceManifest | None,
    reference: ReferenceStats | None,
    specs: list[MutationSpec],
    weights: WeightVector,
    *,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
    today: date | None = None,
) -> SuiteReport:
    """Score every mutated variant against the baseline.

    Noise mutations must strictly lower the DQ score; cleaning mutations
    must not lower it, and must strictly raise it when the ingredient they
    target had room to improve. No-op mutations are recorded as SKIP.
    """
    baseline_vector, _ = compute_all(
        dataset,
        codebook,
        manifest,
        reference,
        today=today,
        thresholds=thresholds,
    )
    baseline = dq_score(baseline_vector, weights)
    working_codebook = codebook if codebook is not None else Codebook({})

    entries: list[SuiteEntry] = []
    for spec in specs:
        group = "noise" if spec.kind in NOISE_KINDS else "clean"
        entangled = ENTANGLED_INGREDIENTS[spec.kind]
        result = apply_mutation(dataset, working_codebook, spec, thresholds)
        if not result.changed:
            entries.append(
                SuiteEntry(
                    kind=spec.kind.value,
                    magnitude=spec.magnitude,
                    seed=spec.seed,
                    group=group,
                    verdict="SKIP",
                    dq_score=None,
                    delta=None,
                    note=result.note,
                    entangled=entangled,
                )
            )
            continue
        mutated_codebook = result.codebook if codebook is not None else None
        try:
            vector, _ = compute_all(
                result.dataset,
                mutated_codebook,
                manifest,
                reference,
                today=today,
                thresholds=thresholds,
            )
            score = dq_score(vector, weights)
        except DegenerateInputError as exc:
            entries.append(
                SuiteEntry(
                    kind=spec.kind.value,
                    magnitude=spec.magnitude,
                    seed=spec.seed,
                    group=group,
                    verdict="FAIL",
                    dq_score=None,
                    delta=None,
                    note=f"mutated dataset could not be scored: {exc}",
                    entangled=entangled,
                )
            )
            continue
        if group == "noise":
            ok = score < baseline - _STRICT_EPS
        else:
            target = TARGET_INGREDIENT[spec.kind]
            baseline_target = baseline_vector.get(target)
            impurity_existed = (
                baseline_target is not None
                and baseline_target < 100.0 - _STRICT_EPS
            )
            if impurity_existed:
                ok = score > baseline + _STRICT_EPS
            else:
                ok = score >= baseline - _STRICT_EPS
        entries.append(
            SuiteEntry(
                kind=spec.kind.value,
                magnitude=spec.magnitude,
                seed=spec.seed,
                group=group,
                verdict="PASS" if ok else "FAIL",
                dq_score=score,
                delta=score - baseline,
                note=result.note,
                entangled=entangled,
            )
        )
    return SuiteReport(
        baseline_dq=baseline,
        baseline_ingredients=baseline_vector.as_dict(),
        entries=tuple(entries),
    )


def suite_report_to_json(report: SuiteReport) -> str:
    payload = {
        "baseline": {
            "dq_score": report.baseline_dq,
            "ingredients": report.baseline_ingredients,
        },
        "results": [
            {
                "kind": e.kind,
                "magnitude": e.magnitude,
                "seed": e.seed,
                "group": e.group,
                "verdict": e.verdict,
                "dq_score": e.dq_score,
                "delta": e.delta,
                "note": e.note,
                "entangled_ingredients": list(e.entangled),
            }
            for e in report.entries
        ],
        "summary": {
            "pass": report.passed,
            "fail": report.failed,
            "skip": report.skipped,
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def suite_report_to_text(report: SuiteReport) -> str:
    lines = [
        f"baseline DQ score: {report.baseline_dq:.2f}",
        "",
        f"{'kind':<32}{'magnitude':>10}{'seed':>8}{'DQ':>10}{'delta':>10}  verdict",
    ]
    improved = [e for e in report.entries if e.group == "clean"]
    deteriorated = [e for e in report.entries if e.group == "noise"]
    for title, group in (("improved", improved), ("deteriorated", deteriorated)):
        if not group:
            continue
        lines.append(f"-- expected {title} --")
        for e in group:
            dq = f"{e.dq_score:.2f}" if e.dq_score is not None else "-"
            delta = f"{e.delta:+.2f}" if e.delta is not None else "-"
            lines.append(
                f"{e.kind:<32}{e.magnitude:>10.2f}{e.seed:>8}{dq:>10}"
                f"{delta:>10}  {e.verdict}"
                + (f" ({e.note})" if e.note else "")
            )
    lines.append("")
    lines.append(
        f"pass {report.passed}  fail {report.failed}  skip {report.skipped}"
    )
    return "\n".join(lines) + "\n"
