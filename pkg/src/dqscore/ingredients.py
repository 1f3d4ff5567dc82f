"""The nine data-quality ingredient scores, each in [0, 100], with evidence.

Every ingredient is a pure function of immutable inputs returning a
``(score, detail)`` pair; :func:`compute_all` evaluates all nine, marking
an ingredient as not assessed when its inputs are absent or its
preconditions fail. Within-column reductions run over sorted value arrays
so results do not depend on row order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from .config import DEFAULT_THRESHOLDS, Thresholds
from .errors import (
    DegenerateInputError,
    IngredientNotAssessed,
    NotNumericError,
    ValidationError,
)
from .tabular import (
    CellKind,
    Codebook,
    Column,
    Dataset,
    DeclaredType,
    ProvenanceManifest,
    ReferenceStats,
    SourceKind,
    column_stats,
)
from .textsim import hybrid_score

#: Canonical ingredient identifiers, in label row order.
INGREDIENTS = (
    "provenance",
    "uniformity",
    "dataset_characteristics",
    "metadata_coupling",
    "non_duplicate",
    "non_missing",
    "un_skewness",
    "categorical_consistency",
    "un_correlation",
)

_DAYS_PER_YEAR = 365.25


@dataclass(frozen=True)
class IngredientVector:
    """The nine ingredient scores; None marks an unassessed ingredient."""

    provenance: float | None = None
    uniformity: float | None = None
    dataset_characteristics: float | None = None
    metadata_coupling: float | None = None
    non_duplicate: float | None = None
    non_missing: float | None = None
    un_skewness: float | None = None
    categorical_consistency: float | None = None
    un_correlation: float | None = None

    def __post_init__(self):
        for name in INGREDIENTS:
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 100.0:
                raise ValidationError(
                    f"ingredient {name} out of range: {value}"
                )

    @property
    def assessed(self) -> tuple[str, ...]:
        return tuple(n for n in INGREDIENTS if getattr(self, n) is not None)

    def get(self, name: str) -> float | None:
        if name not in INGREDIENTS:
            raise KeyError(name)
        return getattr(self, name)

    def as_dict(self) -> dict[str, float | None]:
        return {n: getattr(self, n) for n in INGREDIENTS}


# --------------------------------------------------------------------------
# Evidence detail records


@dataclass(frozen=True)
class ProvenanceDetail:
    """Rubric breakdown, each component in [0, 25] points."""

    origin: float
    author: float
    recency: float
    accessibility: float
    years_since_update: float


@dataclass(frozen=True)
class CharacteristicsMismatch:
    column: str
    parameter: str
    computed: float | None  # None when the column is absent or not numeric
    reference: float


@dataclass(frozen=True)
class CharacteristicsDetail:
    comparisons: int
    matches: int
    mismatches: tuple[CharacteristicsMismatch, ...]
    unmatched_columns: tuple[str, ...]


@dataclass(frozen=True)
class UniformityDetail:
    #: (column, mismatch fraction, mismatching cell count) per covered column
    columns: tuple[tuple[str, float, int], ...]
    uncovered_columns: tuple[str, ...]


@dataclass(frozen=True)
class CouplingDetail:
    #: (column, coupling score) sorted ascending by score
    scores: tuple[tuple[str, float], ...]
    missing_descriptions: tuple[str, ...]


@dataclass(frozen=True)
class MissingDetail:
    #: (row index, column name) of each missing cell, row-major order
    cells: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class DuplicateDetail:
    #: (duplicate row index, first occurrence index)
    rows: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class SkewnessDetail:
    #: (column, g1) per numeric column, dataset order
    columns: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class CategoricalDetail:
    #: (column, declared, detected) per inconsistent column
    inconsistent: tuple[tuple[str, str, str], ...]


@dataclass(frozen=True)
class CorrelationPair:
    column_a: str
    column_b: str
    r: float
    degenerate: bool = False  # zero variance or fewer than 2 paired rows


@dataclass(frozen=True)
class CorrelationDetail:
    #: all pairs sorted by |r| descending
    pairs: tuple[CorrelationPair, ...]


@dataclass(frozen=True)
class EvidenceDetail:
    """Structured findings for every assessed ingredient."""

    provenance: ProvenanceDetail | None = None
    characteristics: CharacteristicsDetail | None = None
    uniformity: UniformityDetail | None = None
    coupling: CouplingDetail | None = None
    missing: MissingDetail | None = None
    duplicates: DuplicateDetail | None = None
    skewness: SkewnessDetail | None = None
    categorical: CategoricalDetail | None = None
    correlation: CorrelationDetail | None = None
    not_assessed: dict[str, str] = field(default_factory=dict)


# --------------------------------------------------------------------------
# Individual ingredients


def provenance_score(
    manifest: ProvenanceManifest,
    today: date,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> tuple[float, ProvenanceDetail]:
    """Equal-weight rubric over origin, author, recency, accessibility."""
    if manifest.last_updated > today:
        raise ValidationError(
            f"last_updated {manifest.last_updated.isoformat()} is in the "
            f"future relative to {today.isoformat()}"
        )
    if manifest.source_kind in (SourceKind.GOVERNMENT, SourceKind.INSTITUTIONAL):
        origin = 1.0
    else:
        origin = min(
            1.0,
            math.log10(1 + manifest.usage_count) / thresholds.usage_log_divisor,
        )
    author = 1.0 if manifest.author else 0.0
    years = (today - manifest.last_updated).days / _DAYS_PER_YEAR
    recency = max(0.0, 1.0 - years / thresholds.recency_window_years)
    accessibility = (
        manifest.open_format
        + manifest.license_present
        + manifest.preprocessing_documented
    ) / 3.0
    detail = ProvenanceDetail(
        origin=25.0 * origin,
        author=25.0 * author,
        recency=25.0 * recency,
        accessibility=25.0 * accessibility,
        years_since_update=years,
    )
    score = detail.origin + detail.author + detail.recency + detail.accessibility
    return score, detail


_MATCH_RTOL = 1e-6


def _stats_match(computed: float, reference: float, parameter: str) -> bool:
    if parameter == "count":
        return computed == reference
    return abs(computed - reference) <= _MATCH_RTOL * max(1.0, abs(reference))


def characteristics_score(
    dataset: Dataset, reference: ReferenceStats
) -> tuple[float, CharacteristicsDetail]:
    """Fraction of reference statistics the computed statistics agree with."""
    if not reference.entries:
        raise DegenerateInputError("reference statistics are empty")
    names = set(dataset.column_names)
    comparisons = 0
    matches = 0
    mismatches: list[CharacteristicsMismatch] = []
    unmatched: list[str] = []
    for column_name, entry in reference.entries.items():
        provided = list(entry.provided())
        if not provided:
            continue
        computed = None
        if column_name not in names:
            unmatched.append(column_name)
        else:
            try:
                computed = column_stats(dataset.column(column_name)).as_dict()
            except NotNumericError:
                computed = None
        for parameter, expected in provided:
            comparisons += 1
            actual = computed[parameter] if computed is not None else None
            if actual is not None and _stats_match(actual, expected, parameter):
                matches += 1
            else:
                mismatches.append(
                    CharacteristicsMismatch(
                        column=column_name,
                        parameter=parameter,
                        computed=None if actual is None else float(actual),
                        reference=float(expected),
                    )
                )
    if comparisons == 0:
        raise DegenerateInputError("reference statistics provide no values")
    detail = CharacteristicsDetail(
        comparisons=comparisons,
        matches=matches,
        mismatches=tuple(mismatches),
        unmatched_columns=tuple(unmatched),
    )
    return 100.0 * matches / comparisons, detail


_COMPATIBLE = {
    DeclaredType.CONTINUOUS: frozenset({CellKind.INTEGER, CellKind.REAL}),
    DeclaredType.DATE: frozenset({CellKind.DATE}),
}


def uniformity_score(
    dataset: Dataset, codebook: Codebook
) -> tuple[float, UniformityDetail]:
    """Mean per-column fraction of cells matching the declared type.

    Categorical and text columns accept any non-missing kind; all-missing
    columns contribute zero mismatch. Columns absent from the codebook are
    excluded and reported.
    """
    covered: list[tuple[Column, DeclaredType]] = []
    uncovered: list[str] = []
    for column in dataset.columns:
        entry = codebook.get(column.name)
        if entry is None:
            uncovered.append(column.name)
        else:
            covered.append((column, entry.declared_type))
    if not covered:
        raise IngredientNotAssessed(
            "no dataset column appears in the codebook"
        )
    per_column: list[tuple[str, float, int]] = []
    for column, declared in covered:
        non_missing = column.non_missing_count
        if non_missing == 0 or declared not in _COMPATIBLE:
            per_column.append((column.name, 0.0, 0))
            continue
        allowed = _COMPATIBLE[declared]
        ok = sum(column.kind_counts[kind] for kind in allowed)
        mismatching = non_missing - ok
        per_column.append(
            (column.name, mismatching / non_missing, mismatching)
        )
    mean_fraction = math.fsum(f for _, f, _ in per_column) / len(per_column)
    detail = UniformityDetail(
        columns=tuple(per_column), uncovered_columns=tuple(uncovered)
    )
    return 100.0 * (1.0 - mean_fraction), detail


def metadata_coupling_score(
    dataset: Dataset, codebook: Codebook
) -> tuple[float, CouplingDetail]:
    """Mean hybrid name/description similarity over all columns."""
    if not dataset.columns:
        raise DegenerateInputError("dataset has no columns")
    scores: list[tuple[str, float]] = []
    missing_desc: list[str] = []
    for column in dataset.columns:
        entry = codebook.get(column.name)
        description = entry.description if entry else ""
        if not description.strip():
            missing_desc.append(column.name)
            scores.append((column.name, 0.0))
        else:
            scores.append((column.name, hybrid_score(column.name, description)))
    mean = math.fsum(s for _, s in scores) / len(scores)
    detail = CouplingDetail(
        scores=tuple(sorted(scores, key=lambda kv: (kv[1], kv[0]))),
        missing_descriptions=tuple(missing_desc),
    )
    return 100.0 * mean, detail


def missing_score(dataset: Dataset) -> tuple[float, MissingDetail]:
    """Percentage of non-missing cells; evidence lists every coordinate."""
    total = dataset.row_count * len(dataset.columns)
    if total == 0:
        raise DegenerateInputError("dataset has no cells")
    position = {name: i for i, name in enumerate(dataset.column_names)}
    coordinates: list[tuple[int, str]] = []
    for column in dataset.columns:
        if column.missing_count == 0:
            continue
        for row, kind in enumerate(column.kinds):
            if kind is CellKind.MISSING:
                coordinates.append((row, column.name))
    coordinates.sort(key=lambda rc: (rc[0], position[rc[1]]))
    score = 100.0 * (1.0 - len(coordinates) / total)
    return score, MissingDetail(cells=tuple(coordinates))


def duplicate_score(dataset: Dataset) -> tuple[float, DuplicateDetail]:
    """Percentage of rows that are not exact copies of an earlier row."""
    if dataset.row_count == 0:
        raise DegenerateInputError("dataset has no rows")
    seen: dict[tuple[str, ...], int] = {}
    duplicates: list[tuple[int, int]] = []
    for index, row in enumerate(dataset.iter_rows()):
        first = seen.setdefault(row, index)
        if first != index:
            duplicates.append((index, first))
    score = 100.0 * (1.0 - len(duplicates) / dataset.row_count)
    return score, DuplicateDetail(rows=tuple(duplicates))


def _column_skewness(values: np.ndarray) -> float:
    """Moment coefficient g1 = m3 / m2^1.5 (0 for constant columns)."""
    mean = np.mean(values)
    deviations = values - mean
    m2 = float(np.mean(deviations * deviations))
    if m2 == 0.0:
        return 0.0
    m3 = float(np.mean(deviations * deviations * deviations))
    return m3 / m2**1.5


def skewness_score(
    dataset: Dataset, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> tuple[float, SkewnessDetail]:
    """Linear penalty on |g1| saturating at the configured threshold."""
    numeric = [c for c in dataset.columns if c.is_numeric]
    if not numeric:
        raise IngredientNotAssessed("dataset has no numeric columns")
    saturation = thresholds.skew_saturation
    g1s: list[tuple[str, float]] = []
    column_scores: list[float] = []
    for column in numeric:
        g1 = _column_skewness(column.sorted_numeric_values)
        g1s.append((column.name, g1))
        column_scores.append(
            max(0.0, 1.0 - min(abs(g1), saturation) / saturation)
        )
    score = 100.0 * (math.fsum(column_scores) / len(column_scores))
    return score, SkewnessDetail(columns=tuple(g1s))


def _detected_continuous(column: Column, thresholds: Thresholds) -> bool:
    if not column.is_numeric:
        return False
    distinct = int(np.unique(column.numeric_cell_values).size)
    ratio = distinct / column.non_missing_count
    return (
        ratio > thresholds.categorical_distinct_ratio
        or distinct > thresholds.categorical_distinct_count
    )


def categorical_consistency_score(
    dataset: Dataset,
    codebook: Codebook,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> tuple[float, CategoricalDetail]:
    """Fraction of columns whose declared categorical/continuous type
    contradicts what the values look like."""
    total = len(dataset.columns)
    if total == 0:
        raise DegenerateInputError("dataset has no columns")
    inconsistent: list[tuple[str, str, str]] = []
    for column in dataset.columns:
        entry = codebook.get(column.name)
        if entry is None or entry.declared_type not in (
            DeclaredType.CATEGORICAL,
            DeclaredType.CONTINUOUS,
        ):
            continue
        if column.non_missing_count == 0:
            continue
        detected = _detected_continuous(column, thresholds)
        declared = entry.declared_type
        if declared is DeclaredType.CATEGORICAL and detected:
            inconsistent.append((column.name, "categorical", "continuous"))
        elif declared is DeclaredType.CONTINUOUS and not detected:
            inconsistent.append((column.name, "continuous", "categorical"))
    score = 100.0 * (1.0 - len(inconsistent) / total)
    return score, CategoricalDetail(inconsistent=tuple(inconsistent))


def pairwise_pearson(
    dataset: Dataset,
) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Pairwise-deletion Pearson matrix over the numeric columns.

    Returns (column names, r matrix, degenerate mask). A pair is
    degenerate (r forced to 0) when it has fewer than 2 joint observations
    or a zero-variance side. Computed with masked matrix products so the
    cost is a handful of BLAS calls even for hundreds of columns.
    """
    numeric = [c for c in dataset.columns if c.is_numeric]
    names = [c.name for c in numeric]
    if len(numeric) < 2:
        shape = (len(numeric), len(numeric))
        return names, np.zeros(shape), np.zeros(shape, dtype=bool)
    X = np.column_stack([c.aligned_numeric for c in numeric])
    valid = np.isfinite(X)
    Z = np.where(valid, X, 0.0)
    M = valid.astype(np.float64)
    n = M.T @ M
    s_xy = Z.T @ Z
    s_x = Z.T @ M  # s_x[j, k] = sum of column j over rows valid in both
    s_xx = (Z * Z).T @ M
    numerator = n * s_xy - s_x * s_x.T
    var_a = np.maximum(n * s_xx - s_x * s_x, 0.0)
    denominator = np.sqrt(var_a) * np.sqrt(var_a.T)
    degenerate = (n < 2) | (denominator <= 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(degenerate, 0.0, numerator / np.where(degenerate, 1.0, denominator))
    r = np.clip(r, -1.0, 1.0)
    np.fill_diagonal(r, 1.0)
    return names, r, degenerate


def correlation_score(
    dataset: Dataset, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> tuple[float, CorrelationDetail]:
    """Fraction of numeric column pairs below the |r| cutoff."""
    names, r, degenerate = pairwise_pearson(dataset)
    if len(names) < 2:
        raise IngredientNotAssessed(
            "fewer than 2 numeric columns for correlation"
        )
    pairs: list[CorrelationPair] = []
    high = 0
    for j in range(len(names)):
        for k in range(j + 1, len(names)):
            value = float(r[j, k])
            pairs.append(
                CorrelationPair(
                    column_a=names[j],
                    column_b=names[k],
                    r=value,
                    degenerate=bool(degenerate[j, k]),
                )
            )
            if abs(value) >= thresholds.correlation_cutoff:
                high += 1
    total_pairs = len(pairs)
    pairs.sort(key=lambda p: (-abs(p.r), p.column_a, p.column_b))
    score = 100.0 * (1.0 - high / total_pairs)
    return score, CorrelationDetail(pairs=tuple(pairs))


def compute_all(
    dataset: Dataset,
    codebook: Codebook | None = None,
    manifest: ProvenanceManifest | None = None,
    reference: ReferenceStats | None = None,
    *,
    today: date | None = None,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
    jobs: int = 1,
) -> tuple[IngredientVector, EvidenceDetail]:
    """Evaluate all nine ingredients; unassessable ones are reported.

    ``jobs > 1`` evaluates the ingredients in a thread pool; each
    ingredient is pure, so results are identical to the sequential run.
    """
    if dataset.row_count * len(dataset.columns) == 0:
        raise DegenerateInputError("dataset has no cells")
    evaluation_date = today if today is not None else date.today()

    def _provenance():
        if manifest is None:
            raise IngredientNotAssessed("no provenance manifest provided")
        return provenance_score(manifest, evaluation_date, thresholds)

    def _uniformity():
        if codebook is None:
            raise IngredientNotAssessed("no codebook provided")
        return uniformity_score(dataset, codebook)

    def _characteristics():
        if reference is None or not reference.entries:
            raise IngredientNotAssessed("no reference statistics provided")
        return characteristics_score(dataset, reference)

    def _coupling():
        if codebook is None:
            raise IngredientNotAssessed("no codebook provided")
        return metadata_coupling_score(dataset, codebook)

    def _categorical():
        if codebook is None:
            raise IngredientNotAssessed("no codebook provided")
        return categorical_consistency_score(dataset, codebook, thresholds)

    tasks = {
        "provenance": _provenance,
        "uniformity": _uniformity,
        "dataset_characteristics": _characteristics,
        "metadata_coupling": _coupling,
        "non_duplicate": lambda: duplicate_score(dataset),
        "non_missing": lambda: missing_score(dataset),
        "un_skewness": lambda: skewness_score(dataset, thresholds),
        "categorical_consistency": _categorical,
        "un_correlation": lambda: correlation_score(dataset, thresholds),
    }

    def _run(func):
        try:
            return func(), None
        except IngredientNotAssessed as exc:
            return None, str(exc)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run, tasks.values()))
    else:
        outcomes = [_run(func) for func in tasks.values()]

    scores: dict[str, float] = {}
    details: dict[str, object] = {}
    not_assessed: dict[str, str] = {}
    for name, (result, reason) in zip(tasks, outcomes):
        if result is None:
            not_assessed[name] = reason
        else:
            scores[name], details[name] = result

    vector = IngredientVector(**scores)
    evidence = EvidenceDetail(
        provenance=details.get("provenance"),
        characteristics=details.get("dataset_characteristics"),
        uniformity=details.get("uniformity"),
        coupling=details.get("metadata_coupling"),
        missing=details.get("non_missing"),
        duplicates=details.get("non_duplicate"),
        skewness=details.get("un_skewness"),
        categorical=details.get("categorical_consistency"),
        correlation=details.get("un_correlation"),
        not_assessed=not_assessed,
    )
    return vector, evidence
