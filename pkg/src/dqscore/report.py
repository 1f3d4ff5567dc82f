"""Nutrition-style quality label and the comprehensive findings report.

Rendering is pure and byte-deterministic: the canonical JSON carries no
timestamps, text and HTML show the same numbers rounded half-up to two
decimals, and the HTML is a single self-contained document with inline
styles. Rows affected by missing cells and duplicates are marked with the
CSS classes ``dq-missing`` (green) and ``dq-duplicate`` (yellow).
"""

from __future__ import annotations

import html
import json
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .config import DEFAULT_THRESHOLDS, Thresholds
from .errors import SchemaError
from .ingredients import (
    INGREDIENTS,
    CharacteristicsMismatch,
    CorrelationPair,
    EvidenceDetail,
    IngredientVector,
    ProvenanceDetail,
)
from .scoring import WeightVector, dq_score
from .tabular import Dataset

METRIC_VERSION = "0.1.0"

_PREVIEW_CAP = 50
_EPS = 1e-9


def _fmt2(value: float) -> str:
    """Two decimals, ties rounded half-up (13.005 -> '13.01')."""
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), ROUND_HALF_UP))


# --------------------------------------------------------------------------
# Quality label


@dataclass(frozen=True)
class LabelRow:
    ingredient: str
    weight: float  # configured weight (the active WeightVector)
    effective_weight: float  # renormalized over assessed ingredients
    score: float | None
    contribution: float  # effective_weight * score / 100; 0 if unassessed
    assessed: bool


@dataclass(frozen=True)
class QualityLabel:
    """Per-ingredient weights, scores and contributions plus the total."""

    metric_version: str
    rows: tuple[LabelRow, ...]
    total: float

    @property
    def assessed(self) -> tuple[str, ...]:
        return tuple(r.ingredient for r in self.rows if r.assessed)

    @property
    def renormalized(self) -> bool:
        return any(not r.assessed for r in self.rows)


def build_label(
    ingredients: IngredientVector,
    weights: WeightVector,
    version: str = METRIC_VERSION,
) -> QualityLabel:
    """Assemble the label; the total equals the DQ score by construction."""
    by_name = weights.by_ingredient
    assessed = ingredients.assessed
    assessed_weight = math.fsum(by_name[name] for name in assessed)
    rows = []
    for name in INGREDIENTS:
        weight = by_name[name]
        score = ingredients.get(name)
        if score is None or assessed_weight == 0.0:
            effective = 0.0
            contribution = 0.0
        else:
            effective = 100.0 * weight / assessed_weight
            contribution = effective * score / 100.0
        rows.append(
            LabelRow(
                ingredient=name,
                weight=weight,
                effective_weight=effective,
                score=score,
                contribution=contribution,
                assessed=score is not None,
            )
        )
    total = math.fsum(r.contribution for r in rows)
    return QualityLabel(metric_version=version, rows=tuple(rows), total=total)


def label_to_dict(label: QualityLabel) -> dict:
    return {
        "metric_version": label.metric_version,
        "total": label.total,
        "ingredients": [
            {
                "ingredient": r.ingredient,
                "weight": r.weight,
                "effective_weight": r.effective_weight,
                "score": r.score,
                "contribution": r.contribution,
                "assessed": r.assessed,
            }
            for r in label.rows
        ],
    }


def label_from_dict(payload: dict) -> QualityLabel:
    try:
        rows = tuple(
            LabelRow(
                ingredient=row["ingredient"],
                weight=row["weight"],
                effective_weight=row["effective_weight"],
                score=row["score"],
                contribution=row["contribution"],
                assessed=row["assessed"],
            )
            for row in payload["ingredients"]
        )
        return QualityLabel(
            metric_version=payload["metric_version"],
            rows=rows,
            total=payload["total"],
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed label JSON: {exc}") from None


def label_from_json(data) -> QualityLabel:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"label file is not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise SchemaError("label JSON must be an object")
    return label_from_dict(payload)


def _label_text(label: QualityLabel) -> str:
    width = 26
    lines = [
        "DATA QUALITY LABEL",
        f"metric version {label.metric_version}",
        "",
        f"{'ingredient':<{width}}{'weight%':>9}{'score':>9}{'contrib':>9}",
    ]
    for r in label.rows:
        score = _fmt2(r.score) if r.score is not None else "n/a"
        contrib = _fmt2(r.contribution) if r.assessed else "-"
        marker = "" if r.assessed else " *"
        lines.append(
            f"{r.ingredient + marker:<{width}}{_fmt2(r.weight):>9}"
            f"{score:>9}{contrib:>9}"
        )
    lines.append(
        f"{'TOTAL':<{width}}{_fmt2(math.fsum(r.weight for r in label.rows)):>9}"
        f"{'':>9}{_fmt2(label.total):>9}"
    )
    if label.renormalized:
        lines.append("")
        lines.append(
            "* not assessed; contributions use weights renormalized over"
            " the assessed ingredients"
        )
    return "\n".join(lines) + "\n"


_HTML_STYLE = """\
body { font-family: sans-serif; margin: 2em; color: #222; }
table { border-collapse: collapse; margin: 1em 0; }
th, td { border: 1px solid #999; padding: 4px 10px; text-align: left; }
th { background: #eee; }
td.num { text-align: right; }
caption { font-weight: bold; text-align: left; padding: 4px 0; }
.dq-total { font-weight: bold; background: #f4f4f4; }
.dq-missing { background: #c9f0c9; }
.dq-duplicate { background: #f5e96b; }
h1, h2 { margin-bottom: 0.3em; }
p.note { color: #555; font-style: italic; }
"""


def _label_html_table(label: QualityLabel) -> str:
    rows = []
    for r in label.rows:
        score = _fmt2(r.score) if r.score is not None else "n/a"
        contrib = _fmt2(r.contribution) if r.assessed else "-"
        name = html.escape(r.ingredient) + ("" if r.assessed else " *")
        rows.append(
            f"<tr><td>{name}</td><td class=num>{_fmt2(r.weight)}</td>"
            f"<td class=num>{score}</td><td class=num>{contrib}</td></tr>"
        )
    total_weight = _fmt2(math.fsum(r.weight for r in label.rows))
    rows.append(
        f'<tr class="dq-total"><td>TOTAL</td><td class=num>{total_weight}</td>'
        f"<td></td><td class=num>{_fmt2(label.total)}</td></tr>"
    )
    note = (
        "<p class=note>* not assessed; contributions use weights"
        " renormalized over the assessed ingredients</p>"
        if label.renormalized
        else ""
    )
    return (
        "<table><caption>Data quality label"
        f" (metric version {html.escape(label.metric_version)})</caption>"
        "<tr><th>ingredient</th><th>weight%</th><th>score</th>"
        "<th>contribution</th></tr>" + "".join(rows) + "</table>" + note
    )


def render_label(label: QualityLabel, fmt: str) -> bytes:
    """Render the label as canonical JSON, fixed-width text or HTML."""
    if fmt == "json":
        return (json.dumps(label_to_dict(label), indent=2) + "\n").encode("utf-8")
    if fmt == "text":
        return _label_text(label).encode("utf-8")
    if fmt == "html":
        body = _label_html_table(label)
        doc = (
            "<!DOCTYPE html><html><head><meta charset=\"utf-8\">"
            "<title>Data quality label</title>"
            f"<style>{_HTML_STYLE}</style></head><body><h1>Data quality"
            f" label</h1>{body}</body></html>\n"
        )
        return doc.encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


# --------------------------------------------------------------------------
# Comprehensive report


@dataclass(frozen=True)
class ComprehensiveReport:
    """Label plus every structured finding and improvement suggestion."""

    dataset_name: str
    label: QualityLabel
    correlated_pairs: tuple[CorrelationPair, ...]
    correlation_cutoff: float
    low_coupling: tuple[tuple[str, float], ...]
    coupling_threshold: float
    missing_cells: tuple[tuple[int, str], ...]
    duplicate_rows: tuple[tuple[int, int], ...]
    column_skewness: tuple[tuple[str, float], ...]
    inconsistent_categorical: tuple[tuple[str, str, str], ...]
    provenance_rubric: ProvenanceDetail | None
    characteristics_mismatches: tuple[CharacteristicsMismatch, ...]
    unmatched_reference_columns: tuple[str, ...]
    uncovered_codebook_columns: tuple[str, ...]
    not_assessed: dict[str, str]
    suggestions: tuple[str, ...]
    #: (row index, cells) previews of affected rows, capped
    missing_row_preview: tuple[tuple[int, tuple[str, ...]], ...]
    duplicate_row_preview: tuple[tuple[int, tuple[str, ...]], ...]
    column_names: tuple[str, ...]


def _join_names(names, cap: int = 5) -> str:
    shown = list(names)[:cap]
    suffix = ", ..." if len(names) > cap else ""
    return ", ".join(f'"{n}"' for n in shown) + suffix


def _build_suggestions(
    vector: IngredientVector,
    evidence: EvidenceDetail,
    report_low_coupling,
    thresholds: Thresholds,
) -> tuple[str, ...]:
    """One templated sentence per deficient (assessed, below 100) ingredient."""
    suggestions = []

    def deficient(name: str) -> bool:
        score = vector.get(name)
        return score is not None and score < 100.0 - _EPS

    if deficient("provenance") and evidence.provenance is not None:
        rubric = evidence.provenance
        weak = [
            part
            for part, points in (
                ("origin", rubric.origin),
                ("author", rubric.author),
                ("recency", rubric.recency),
                ("accessibility", rubric.accessibility),
            )
            if points < 25.0 - _EPS
        ]
        suggestions.append(
            f"Provenance loses points on {', '.join(weak)}; complete the"
            " manifest (source, author, update date, accessibility flags)."
        )
    if deficient("uniformity") and evidence.uniformity is not None:
        bad = [name for name, frac, _ in evidence.uniformity.columns if frac > 0]
        suggestions.append(
            f"Columns {_join_names(bad)} contain cells that do not parse as"
            " their declared type; clean the offending cells."
        )
    if deficient("dataset_characteristics") and evidence.characteristics is not None:
        cols = sorted({m.column for m in evidence.characteristics.mismatches})
        suggestions.append(
            f"{len(evidence.characteristics.mismatches)} statistic(s)"
            f" disagree with the reference values (columns"
            f" {_join_names(cols)}); verify the data or refresh the"
            " reference statistics."
        )
    if deficient("metadata_coupling"):
        if report_low_coupling:
            cols = [name for name, _ in report_low_coupling]
            suggestions.append(
                f"Columns {_join_names(cols)} have weak name-description"
                " coupling; improve the description entries in the codebook."
            )
        else:
            suggestions.append(
                "Codebook descriptions only loosely match the column names;"
                " improve the description entries in the codebook."
            )
    if deficient("non_duplicate") and evidence.duplicates is not None:
        suggestions.append(
            f"Remove the {len(evidence.duplicates.rows)} duplicate row(s)"
            " listed in the report."
        )
    if deficient("non_missing") and evidence.missing is not None:
        suggestions.append(
            f"Fill or document the {len(evidence.missing.cells)} missing"
            " cell(s) listed in the report."
        )
    if deficient("un_skewness") and evidence.skewness is not None:
        worst = [
            name
            for name, g1 in sorted(
                evidence.skewness.columns, key=lambda kv: (-abs(kv[1]), kv[0])
            )
            if abs(g1) > 0
        ]
        suggestions.append(
            f"Columns {_join_names(worst)} are skewed; consider transforming"
            " or re-sampling them."
        )
    if deficient("categorical_consistency") and evidence.categorical is not None:
        cols = [name for name, _, _ in evidence.categorical.inconsistent]
        suggestions.append(
            f"Columns {_join_names(cols)} look continuous/categorical"
            " contrary to their declaration; fix the codebook or the data."
        )
    if deficient("un_correlation") and evidence.correlation is not None:
        high = [
            p
            for p in evidence.correlation.pairs
            if abs(p.r) >= thresholds.correlation_cutoff
        ]
        pair_names = [f"{p.column_a}/{p.column_b}" for p in high]
        suggestions.append(
            f"{len(high)} column pair(s) ({_join_names(pair_names)}) exceed"
            f" the |r| cutoff {thresholds.correlation_cutoff}; consider"
            " dropping one column of each pair."
        )
    return tuple(suggestions)


def build_report(
    dataset: Dataset,
    vector: IngredientVector,
    evidence: EvidenceDetail,
    weights: WeightVector,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
    version: str = METRIC_VERSION,
) -> ComprehensiveReport:
    """Assemble the comprehensive report from scored evidence."""
    label = build_label(vector, weights, version)
    correlated = evidence.correlation.pairs if evidence.correlation else ()
    coupling_scores = evidence.coupling.scores if evidence.coupling else ()
    low_coupling = tuple(
        (name, value)
        for name, value in coupling_scores
        if value < thresholds.coupling_suggestion
    )
    missing_cells = evidence.missing.cells if evidence.missing else ()
    duplicate_rows = evidence.duplicates.rows if evidence.duplicates else ()
    skew = evidence.skewness.columns if evidence.skewness else ()
    skew_sorted = tuple(sorted(skew, key=lambda kv: (-abs(kv[1]), kv[0])))
    inconsistent = evidence.categorical.inconsistent if evidence.categorical else ()
    mismatches = (
        evidence.characteristics.mismatches if evidence.characteristics else ()
    )
    unmatched = (
        evidence.characteristics.unmatched_columns
        if evidence.characteristics
        else ()
    )
    uncovered = (
        evidence.uniformity.uncovered_columns if evidence.uniformity else ()
    )

    rows = (
        list(dataset.iter_rows()) if missing_cells or duplicate_rows else []
    )
    missing_rows = []
    seen = set()
    for row_index, _ in missing_cells:
        if row_index not in seen:
            seen.add(row_index)
            missing_rows.append((row_index, rows[row_index]))
        if len(missing_rows) >= _PREVIEW_CAP:
            break
    duplicate_previews = [
        (row_index, rows[row_index])
        for row_index, _ in duplicate_rows[:_PREVIEW_CAP]
    ]

    suggestions = _build_suggestions(vector, evidence, low_coupling, thresholds)
    return ComprehensiveReport(
        dataset_name=dataset.name,
        label=label,
        correlated_pairs=correlated,
        correlation_cutoff=thresholds.correlation_cutoff,
        low_coupling=low_coupling,
        coupling_threshold=thresholds.coupling_suggestion,
        missing_cells=missing_cells,
        duplicate_rows=duplicate_rows,
        column_skewness=skew_sorted,
        inconsistent_categorical=inconsistent,
        provenance_rubric=evidence.provenance,
        characteristics_mismatches=mismatches,
        unmatched_reference_columns=unmatched,
        uncovered_codebook_columns=uncovered,
        not_assessed=dict(evidence.not_assessed),
        suggestions=suggestions,
        missing_row_preview=tuple(missing_rows),
        duplicate_row_preview=tuple(duplicate_previews),
        column_names=dataset.column_names,
    )


def report_to_dict(report: ComprehensiveReport) -> dict:
    rubric = report.provenance_rubric
    return {
        "dataset": report.dataset_name,
        "label": label_to_dict(report.label),
        "renormalized": report.label.renormalized,
        "not_assessed": report.not_assessed,
        "findings": {
            "correlated_pairs": [
                {
                    "column_a": p.column_a,
                    "column_b": p.column_b,
                    "r": p.r,
                    "high": abs(p.r) >= report.correlation_cutoff,
                    "degenerate": p.degenerate,
                }
                for p in report.correlated_pairs
            ],
            "correlation_cutoff": report.correlation_cutoff,
            "low_coupling_columns": [
                {"column": name, "coupling": value}
                for name, value in report.low_coupling
            ],
            "coupling_threshold": report.coupling_threshold,
            "missing_cells": [
                {"row": row, "column": column}
                for row, column in report.missing_cells
            ],
            "duplicate_rows": [
                {"row": row, "first_occurrence": first}
                for row, first in report.duplicate_rows
            ],
            "column_skewness": [
                {"column": name, "g1": g1}
                for name, g1 in report.column_skewness
            ],
            "inconsistent_categorical_columns": [
                {"column": name, "declared": declared, "detected": detected}
                for name, declared, detected in report.inconsistent_categorical
            ],
            "provenance_rubric": (
                None
                if rubric is None
                else {
                    "origin": rubric.origin,
                    "author": rubric.author,
                    "recency": rubric.recency,
                    "accessibility": rubric.accessibility,
                    "years_since_update": rubric.years_since_update,
                }
            ),
            "characteristics_mismatches": [
                {
                    "column": m.column,
                    "parameter": m.parameter,
                    "computed": m.computed,
                    "reference": m.reference,
                }
                for m in report.characteristics_mismatches
            ],
            "unmatched_reference_columns": list(
                report.unmatched_reference_columns
            ),
            "uncovered_codebook_columns": list(
                report.uncovered_codebook_columns
            ),
        },
        "suggestions": list(report.suggestions),
    }


def _report_text(report: ComprehensiveReport) -> str:
    sections = [_label_text(report.label)]

    def add(title: str, lines: list[str]):
        sections.append(f"== {title} ==")
        sections.extend(lines if lines else ["(none)"])
        sections.append("")

    add(
        f"correlated pairs (|r| >= {report.correlation_cutoff} is high)",
        [
            f"{p.column_a} ~ {p.column_b}: r = {p.r:+.3f}"
            + (" [high]" if abs(p.r) >= report.correlation_cutoff else "")
            + (" [degenerate]" if p.degenerate else "")
            for p in report.correlated_pairs
        ],
    )
    add(
        f"low metadata coupling (< {report.coupling_threshold})",
        [f"{name}: {value:.3f}" for name, value in report.low_coupling],
    )
    add(
        "missing cells (row, column)",
        [f"({row}, {column})" for row, column in report.missing_cells],
    )
    add(
        "duplicate rows (row, first occurrence)",
        [f"({row}, {first})" for row, first in report.duplicate_rows],
    )
    add(
        "column skewness (g1)",
        [f"{name}: {g1:+.4f}" for name, g1 in report.column_skewness],
    )
    add(
        "inconsistent categorical/continuous declarations",
        [
            f"{name}: declared {declared}, detected {detected}"
            for name, declared, detected in report.inconsistent_categorical
        ],
    )
    rubric = report.provenance_rubric
    add(
        "provenance rubric (points of 25)",
        []
        if rubric is None
        else [
            f"origin {_fmt2(rubric.origin)}, author {_fmt2(rubric.author)},"
            f" recency {_fmt2(rubric.recency)},"
            f" accessibility {_fmt2(rubric.accessibility)}"
        ],
    )
    add(
        "reference statistics mismatches",
        [
            f"{m.column}.{m.parameter}: computed "
            + ("n/a" if m.computed is None else f"{m.computed:.6g}")
            + f", reference {m.reference:.6g}"
            for m in report.characteristics_mismatches
        ]
        + [
            f"column {name!r} not found in the dataset"
            for name in report.unmatched_reference_columns
        ],
    )
    if report.not_assessed:
        add(
            "not assessed",
            [f"{name}: {reason}" for name, reason in report.not_assessed.items()],
        )
    add("suggestions", list(report.suggestions))
    return "\n".join(sections)


def _preview_table(title: str, css_class: str, previews, column_names) -> str:
    if not previews:
        return ""
    header = "".join(f"<th>{html.escape(c)}</th>" for c in column_names)
    rows = []
    for row_index, cells in previews:
        tds = "".join(f"<td>{html.escape(c)}</td>" for c in cells)
        rows.append(f'<tr class="{css_class}"><td class=num>{row_index}</td>{tds}</tr>')
    return (
        f"<table><caption>{html.escape(title)}</caption>"
        f"<tr><th>row</th>{header}</tr>" + "".join(rows) + "</table>"
    )


def _report_html(report: ComprehensiveReport) -> str:
    parts = [
        "<!DOCTYPE html><html><head><meta charset=\"utf-8\">",
        f"<title>Data quality report: {html.escape(report.dataset_name)}</title>",
        f"<style>{_HTML_STYLE}</style></head><body>",
        f"<h1>Data quality report: {html.escape(report.dataset_name)}</h1>",
        _label_html_table(report.label),
    ]

    def section(title: str, rows: list[str], headers: tuple[str, ...]):
        parts.append(f"<h2>{html.escape(title)}</h2>")
        if not rows:
            parts.append("<p class=note>none</p>")
            return
        head = "".join(f"<th>{html.escape(h)}</th>" for h in headers)
        parts.append(f"<table><tr>{head}</tr>{''.join(rows)}</table>")

    section(
        "Correlated pairs",
        [
            f"<tr><td>{html.escape(p.column_a)}</td>"
            f"<td>{html.escape(p.column_b)}</td><td class=num>{p.r:+.3f}</td>"
            f"<td>{'high' if abs(p.r) >= report.correlation_cutoff else ''}"
            f"{' degenerate' if p.degenerate else ''}</td></tr>"
            for p in report.correlated_pairs
        ],
        ("column a", "column b", "r", "flags"),
    )
    section(
        f"Low metadata coupling (&lt; {report.coupling_threshold})",
        [
            f"<tr><td>{html.escape(name)}</td><td class=num>{value:.3f}</td></tr>"
            for name, value in report.low_coupling
        ],
        ("column", "coupling"),
    )
    section(
        "Missing cells",
        [
            f"<tr><td class=num>{row}</td><td>{html.escape(column)}</td></tr>"
            for row, column in report.missing_cells[:_PREVIEW_CAP]
        ],
        ("row", "column"),
    )
    if len(report.missing_cells) > _PREVIEW_CAP:
        parts.append(
            f"<p class=note>{len(report.missing_cells) - _PREVIEW_CAP}"
            " more missing cells omitted</p>"
        )
    section(
        "Duplicate rows",
        [
            f"<tr><td class=num>{row}</td><td class=num>{first}</td></tr>"
            for row, first in report.duplicate_rows[:_PREVIEW_CAP]
        ],
        ("row", "first occurrence"),
    )
    if len(report.duplicate_rows) > _PREVIEW_CAP:
        parts.append(
            f"<p class=note>{len(report.duplicate_rows) - _PREVIEW_CAP}"
            " more duplicate rows omitted</p>"
        )
    section(
        "Column skewness",
        [
            f"<tr><td>{html.escape(name)}</td><td class=num>{g1:+.4f}</td></tr>"
            for name, g1 in report.column_skewness
        ],
        ("column", "g1"),
    )
    section(
        "Inconsistent categorical/continuous declarations",
        [
            f"<tr><td>{html.escape(name)}</td><td>{declared}</td>"
            f"<td>{detected}</td></tr>"
            for name, declared, detected in report.inconsistent_categorical
        ],
        ("column", "declared", "detected"),
    )
    rubric = report.provenance_rubric
    if rubric is not None:
        section(
            "Provenance rubric (points of 25)",
            [
                f"<tr><td class=num>{_fmt2(rubric.origin)}</td>"
                f"<td class=num>{_fmt2(rubric.author)}</td>"
                f"<td class=num>{_fmt2(rubric.recency)}</td>"
                f"<td class=num>{_fmt2(rubric.accessibility)}</td></tr>"
            ],
            ("origin", "author", "recency", "accessibility"),
        )
    section(
        "Reference statistics mismatches",
        [
            f"<tr><td>{html.escape(m.column)}</td><td>{m.parameter}</td>"
            f"<td class=num>"
            + ("n/a" if m.computed is None else f"{m.computed:.6g}")
            + f"</td><td class=num>{m.reference:.6g}</td></tr>"
            for m in report.characteristics_mismatches
        ],
        ("column", "parameter", "computed", "reference"),
    )
    parts.append(
        _preview_table(
            "Rows with missing cells",
            "dq-missing",
            report.missing_row_preview,
            report.column_names,
        )
    )
    parts.append(
        _preview_table(
            "Duplicate rows",
            "dq-duplicate",
            report.duplicate_row_preview,
            report.column_names,
        )
    )
    parts.append("<h2>Suggestions</h2>")
    if report.suggestions:
        items = "".join(f"<li>{html.escape(s)}</li>" for s in report.suggestions)
        parts.append(f"<ul>{items}</ul>")
    else:
        parts.append("<p class=note>none</p>")
    parts.append("</body></html>\n")
    return "".join(parts)


def render_report(report: ComprehensiveReport, fmt: str) -> bytes:
    """Render the comprehensive report as JSON, text or standalone HTML."""
    if fmt == "json":
        return (json.dumps(report_to_dict(report), indent=2) + "\n").encode("utf-8")
    if fmt == "text":
        return _report_text(report).encode("utf-8")
    if fmt == "html":
        return _report_html(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")
