"""Dataset, codebook, manifest and reference-statistics models and parsers.

Datasets are immutable after parsing: cells are stored as trimmed raw
strings together with an inferred :class:`CellKind` per cell. All parsers
accept ``bytes`` or ``str`` and validate eagerly so downstream code never
sees a half-built structure.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import (
    EmptyInputError,
    NotNumericError,
    ParseError,
    SchemaError,
)

#: Tokens (upper-cased, post-trim) that mark a cell as missing.
DEFAULT_MISSING_TOKENS = frozenset({"", "NA", "N/A", "NAN", "NULL", "."})


class CellKind(Enum):
    MISSING = "missing"
    INTEGER = "integer"
    REAL = "real"
    DATE = "date"
    BOOLEAN = "boolean"
    TEXT = "text"


NUMERIC_KINDS = frozenset({CellKind.INTEGER, CellKind.REAL})


def infer_cell_kind(
    raw: str, missing_tokens: frozenset[str] = DEFAULT_MISSING_TOKENS
) -> CellKind:
    """Classify one raw cell value. Total, pure and deterministic.

    Missing tokens take priority over everything else. Numeric literals
    must be ASCII (integers are a subset of reals); dates must be strict
    ISO-8601 ``YYYY-MM-DD``; ``true``/``false`` in any case are booleans;
    anything else is text.
    """
    s = raw.strip()
    if not s or s.upper() in missing_tokens:
        return CellKind.MISSING
    c0 = s[0]
    if (c0.isdigit() or c0 in "+-.") and s.isascii() and "_" not in s:
        body = s[1:] if c0 in "+-" else s
        if body.isdigit():
            return CellKind.INTEGER
        try:
            value = float(s)
        except ValueError:
            pass
        else:
            # float() accepts inf/nan spellings only with an alphabetic
            # first character, which the guard above already excludes;
            # isfinite() is kept as a safety net.
            if math.isfinite(value):
                return CellKind.REAL
    if len(s) == 10 and s[4] == "-" and s[7] == "-":
        try:
            date.fromisoformat(s)
        except ValueError:
            pass
        else:
            return CellKind.DATE
    if s.lower() in ("true", "false"):
        return CellKind.BOOLEAN
    return CellKind.TEXT


@dataclass(frozen=True)
class Column:
    """One named column: trimmed raw cells plus their inferred kinds."""

    name: str
    cells: tuple[str, ...]
    kinds: tuple[CellKind, ...]

    def __post_init__(self):
        if len(self.cells) != len(self.kinds):
            raise ValueError(
                f"column {self.name!r}: {len(self.cells)} cells but "
                f"{len(self.kinds)} kinds"
            )

    @classmethod
    def build(
        cls,
        name: str,
        cells,
        missing_tokens: frozenset[str] = DEFAULT_MISSING_TOKENS,
    ) -> "Column":
        trimmed = tuple(c.strip() for c in cells)
        kinds = tuple(infer_cell_kind(c, missing_tokens) for c in trimmed)
        return cls(name.strip(), trimmed, kinds)

    def __len__(self) -> int:
        return len(self.cells)

    @cached_property
    def kind_counts(self) -> Counter:
        return Counter(self.kinds)

    @property
    def missing_count(self) -> int:
        return self.kind_counts[CellKind.MISSING]

    @property
    def non_missing_count(self) -> int:
        return len(self.cells) - self.missing_count

    @cached_property
    def is_numeric(self) -> bool:
        """True when the column has >=1 non-missing cell and every
        non-missing cell is an integer or real literal."""
        counts = self.kind_counts
        numeric = counts[CellKind.INTEGER] + counts[CellKind.REAL]
        return numeric > 0 and numeric == self.non_missing_count

    @cached_property
    def numeric_cell_values(self) -> np.ndarray:
        """Values of the integer/real cells, in row order."""
        vals = [
            cell
            for cell, kind in zip(self.cells, self.kinds)
            if kind in NUMERIC_KINDS
        ]
        return np.array(vals, dtype=np.float64)

    @cached_property
    def sorted_numeric_values(self) -> np.ndarray:
        """Numeric cell values in ascending order.

        Reductions over this array are invariant under any permutation of
        the original cells, which keeps the statistics order-independent.
        """
        return np.sort(self.numeric_cell_values)

    @cached_property
    def aligned_numeric(self) -> np.ndarray:
        """Row-aligned float array with NaN at missing cells.

        Only meaningful for fully numeric columns; raises otherwise.
        """
        if not self.is_numeric:
            raise NotNumericError(
                f"column {self.name!r} is not a numeric column"
            )
        return np.array(
            [
                cell if kind in NUMERIC_KINDS else "nan"
                for cell, kind in zip(self.cells, self.kinds)
            ],
            dtype=np.float64,
        )


@dataclass(frozen=True)
class Dataset:
    """Immutable snapshot of a parsed tabular file."""

    name: str
    columns: tuple[Column, ...]
    missing_tokens: frozenset[str] = DEFAULT_MISSING_TOKENS

    def __post_init__(self):
        seen = set()
        for col in self.columns:
            if col.name in seen:
                raise ParseError(f'duplicate column name "{col.name}"')
            seen.add(col.name)
        lengths = {len(col) for col in self.columns}
        if len(lengths) > 1:
            raise ParseError(f"columns have unequal lengths: {sorted(lengths)}")

    @property
    def row_count(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(col.name for col in self.columns)

    def column(self, name: str) -> Column:
        for col in self.columns:
            if col.name == name:
                return col
        raise KeyError(name)

    def iter_rows(self):
        """Yield each data row as a tuple of trimmed cell strings."""
        return zip(*(col.cells for col in self.columns)) if self.columns else iter(())


@dataclass(frozen=True)
class ParseOptions:
    """CSV dialect and missing-token configuration for dataset parsing."""

    delimiter: str = ","
    extra_missing_tokens: tuple[str, ...] = ()

    @cached_property
    def missing_tokens(self) -> frozenset[str]:
        extra = {t.strip().upper() for t in self.extra_missing_tokens}
        return DEFAULT_MISSING_TOKENS | frozenset(extra)


DEFAULT_PARSE_OPTIONS = ParseOptions()


def _decode(data) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from None


def _read_csv_rows(text: str, delimiter: str) -> list[list[str]]:
    """All rows of a CSV document; blank lines are skipped (RFC 4180
    permits a trailing line break)."""
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter)
    try:
        return [row for row in reader if row]
    except csv.Error as exc:
        raise ParseError(f"malformed CSV: {exc}") from None


def parse_dataset(
    data,
    options: ParseOptions = DEFAULT_PARSE_OPTIONS,
    name: str = "dataset",
) -> Dataset:
    """Parse an RFC 4180 CSV document with a header row into a Dataset.

    Headers and cells are trimmed; ragged rows are an error reported with
    the file row index (header = row 0).
    """
    rows = _read_csv_rows(_decode(data), options.delimiter)
    if not rows:
        raise EmptyInputError("dataset file is empty")
    header = [h.strip() for h in rows[0]]
    for pos, col_name in enumerate(header):
        if not col_name:
            raise ParseError(f"empty column name at header position {pos}")
    width = len(header)
    cells_by_col: list[list[str]] = [[] for _ in range(width)]
    for idx, row in enumerate(rows[1:], start=1):
        if len(row) != width:
            raise ParseError(
                f"row {idx} has {len(row)} fields, expected {width}",
                row=idx,
            )
        for pos, cell in enumerate(row):
            cells_by_col[pos].append(cell)
    columns = tuple(
        Column.build(col_name, cells, options.missing_tokens)
        for col_name, cells in zip(header, cells_by_col)
    )
    return Dataset(name=name, columns=columns, missing_tokens=options.missing_tokens)


def serialize_dataset(dataset: Dataset, delimiter: str = ",") -> str:
    """Render a Dataset back to RFC 4180 CSV text (header + rows)."""
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\r\n")
    writer.writerow(dataset.column_names)
    single = len(dataset.columns) == 1
    for row in dataset.iter_rows():
        if single and row[0] == "":
            # an unquoted empty single-field row would read back as a
            # blank line and vanish
            buf.write('""\r\n')
        else:
            writer.writerow(row)
    return buf.getvalue()


# --------------------------------------------------------------------------
# Column statistics


@dataclass(frozen=True)
class StatsSummary:
    """Descriptive statistics of a column's numeric cells.

    ``count`` is the number of non-missing cells (numeric or not);
    ``std_dev`` is the population standard deviation; mode ties break
    toward the smallest value.
    """

    mean: float
    median: float
    mode: float
    std_dev: float
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be >= 0")
        if self.std_dev < 0:
            raise ValueError("std_dev must be >= 0")
        if not (self.min <= self.median <= self.max):
            raise ValueError("expected min <= median <= max")

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "median": self.median,
            "mode": self.mode,
            "std_dev": self.std_dev,
            "min": self.min,
            "max": self.max,
            "count": self.count,
        }


def column_stats(column: Column) -> StatsSummary:
    """Summarize a column's numeric cells; requires at least one."""
    values = column.sorted_numeric_values
    if values.size == 0:
        raise NotNumericError(
            f"column {column.name!r} has no numeric cells"
        )
    uniques, counts = np.unique(values, return_counts=True)
    # uniques are ascending, argmax takes the first maximum: smallest wins.
    mode = float(uniques[np.argmax(counts)])
    return StatsSummary(
        mean=float(np.mean(values)),
        median=float(np.median(values)),
        mode=mode,
        std_dev=float(np.std(values)),
        min=float(values[0]),
        max=float(values[-1]),
        count=column.non_missing_count,
    )


# --------------------------------------------------------------------------
# Codebook


class DeclaredType(Enum):
    CATEGORICAL = "categorical"
    CONTINUOUS = "continuous"
    TEXT = "text"
    DATE = "date"


@dataclass(frozen=True)
class CodebookEntry:
    description: str
    declared_type: DeclaredType


@dataclass(frozen=True)
class Codebook:
    """Per-column metadata: human description plus declared type."""

    entries: dict[str, CodebookEntry] = field(default_factory=dict)

    def get(self, column_name: str) -> CodebookEntry | None:
        return self.entries.get(column_name)


CODEBOOK_HEADER = ("column", "description", "declared_type")


def parse_codebook(data) -> Codebook:
    """Parse the codebook CSV (header ``column,description,declared_type``)."""
    rows = _read_csv_rows(_decode(data), ",")
    if not rows:
        raise EmptyInputError("codebook file is empty")
    header = tuple(h.strip() for h in rows[0])
    if header != CODEBOOK_HEADER:
        unexpected = [h for h in header if h not in CODEBOOK_HEADER]
        if unexpected:
            raise SchemaError(
                f'unknown codebook header field "{unexpected[0]}"'
            )
        raise SchemaError(
            f"codebook header must be {','.join(CODEBOOK_HEADER)}, "
            f"got {','.join(header)}"
        )
    entries: dict[str, CodebookEntry] = {}
    for idx, row in enumerate(rows[1:], start=1):
        if len(row) != 3:
            raise ParseError(
                f"codebook row {idx} has {len(row)} fields, expected 3",
                row=idx,
            )
        name, description, declared = (f.strip() for f in row)
        if not name:
            raise SchemaError(f"codebook row {idx}: empty column name")
        if name in entries:
            raise SchemaError(f'duplicate codebook entry for "{name}"')
        try:
            declared_type = DeclaredType(declared.lower())
        except ValueError:
            raise SchemaError(
                f'codebook row {idx}: invalid declared_type "{declared}" '
                f'for column "{name}"'
            ) from None
        entries[name] = CodebookEntry(description, declared_type)
    return Codebook(entries)


def serialize_codebook(codebook: Codebook) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CODEBOOK_HEADER)
    for name, entry in codebook.entries.items():
        writer.writerow([name, entry.description, entry.declared_type.value])
    return buf.getvalue()


# --------------------------------------------------------------------------
# Provenance manifest


class SourceKind(Enum):
    GOVERNMENT = "government"
    INSTITUTIONAL = "institutional"
    COMMUNITY = "community"


@dataclass(frozen=True)
class ProvenanceManifest:
    """Record trail of a dataset: origin, author, recency, accessibility."""

    source_kind: SourceKind
    last_updated: date
    open_format: bool
    license_present: bool
    preprocessing_documented: bool
    author: str | None = None
    usage_count: int = 0


_MANIFEST_REQUIRED = (
    "source_kind",
    "last_updated",
    "open_format",
    "license_present",
    "preprocessing_documented",
)
_MANIFEST_OPTIONAL = ("author", "usage_count")


def _load_json_object(data, what: str) -> dict:
    try:
        obj = json.loads(_decode(data))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what} is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise SchemaError(f"{what} must be a JSON object")
    return obj


def parse_manifest(data) -> ProvenanceManifest:
    """Parse and validate the provenance manifest JSON."""
    obj = _load_json_object(data, "manifest")
    for key in obj:
        if key not in _MANIFEST_REQUIRED and key not in _MANIFEST_OPTIONAL:
            raise SchemaError(f'unknown manifest key "{key}"')
    for key in _MANIFEST_REQUIRED:
        if key not in obj:
            raise SchemaError(f'manifest is missing required field "{key}"')
    try:
        source_kind = SourceKind(str(obj["source_kind"]).lower())
    except ValueError:
        raise SchemaError(
            f'invalid value for field "source_kind": {obj["source_kind"]!r}'
        ) from None
    try:
        last_updated = date.fromisoformat(str(obj["last_updated"]))
    except ValueError:
        raise SchemaError(
            f'field "last_updated" must be an ISO-8601 date, '
            f"got {obj['last_updated']!r}"
        ) from None
    for flag in ("open_format", "license_present", "preprocessing_documented"):
        if not isinstance(obj[flag], bool):
            raise SchemaError(f'field "{flag}" must be a boolean')
    author = obj.get("author")
    if author is not None and not isinstance(author, str):
        raise SchemaError('field "author" must be a string or null')
    usage_count = obj.get("usage_count", 0)
    if not isinstance(usage_count, int) or isinstance(usage_count, bool) or usage_count < 0:
        raise SchemaError('field "usage_count" must be a non-negative integer')
    return ProvenanceManifest(
        source_kind=source_kind,
        last_updated=last_updated,
        open_format=obj["open_format"],
        license_present=obj["license_present"],
        preprocessing_documented=obj["preprocessing_documented"],
        author=author,
        usage_count=usage_count,
    )


# --------------------------------------------------------------------------
# Reference statistics


_REFERENCE_FLOAT_KEYS = ("mean", "median", "mode", "std_dev", "min", "max")
_REFERENCE_INT_KEYS = ("count",)
REFERENCE_KEYS = _REFERENCE_FLOAT_KEYS + _REFERENCE_INT_KEYS


@dataclass(frozen=True)
class ReferenceEntry:
    """Expected statistics for one column; every field optional."""

    mean: float | None = None
    median: float | None = None
    mode: float | None = None
    std_dev: float | None = None
    min: float | None = None
    max: float | None = None
    count: int | None = None

    def provided(self):
        """Yield (parameter, expected_value) for each present field."""
        for key in REFERENCE_KEYS:
            value = getattr(self, key)
            if value is not None:
                yield key, value


@dataclass(frozen=True)
class ReferenceStats:
    """Column-name -> expected statistics, parsed from the reference file."""

    entries: dict[str, ReferenceEntry] = field(default_factory=dict)


def parse_reference_stats(data) -> ReferenceStats:
    """Parse the reference-statistics JSON (column -> stats object)."""
    obj = _load_json_object(data, "reference statistics")
    entries: dict[str, ReferenceEntry] = {}
    for column, stats in obj.items():
        if not isinstance(stats, dict):
            raise SchemaError(
                f'reference entry for column "{column}" must be an object'
            )
        kwargs = {}
        for key, value in stats.items():
            if key not in REFERENCE_KEYS:
                raise SchemaError(
                    f'unknown reference key "{key}" for column "{column}"'
                )
            if key in _REFERENCE_INT_KEYS:
                if not isinstance(value, int) or isinstance(value, bool):
                    raise SchemaError(
                        f'reference "{key}" for column "{column}" '
                        f"must be an integer"
                    )
                kwargs[key] = value
            else:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise SchemaError(
                        f'reference "{key}" for column "{column}" '
                        f"must be a number"
                    )
                kwargs[key] = float(value)
        entries[column] = ReferenceEntry(**kwargs)
    return ReferenceStats(entries)
