"""Shared fixture builders for the test suite."""

from __future__ import annotations

from datetime import date

import numpy as np

from dqscore.tabular import (
    Codebook,
    CodebookEntry,
    Column,
    Dataset,
    DeclaredType,
    ProvenanceManifest,
    SourceKind,
)

TODAY = date(2026, 8, 9)


def make_dataset(columns: dict[str, list], name: str = "test") -> Dataset:
    built = tuple(
        Column.build(col_name, [str(c) for c in cells])
        for col_name, cells in columns.items()
    )
    return Dataset(name=name, columns=built)


def make_codebook(entries: dict[str, tuple[str, str]]) -> Codebook:
    return Codebook(
        {
            name: CodebookEntry(description, DeclaredType(declared))
            for name, (description, declared) in entries.items()
        }
    )


def make_manifest(
    source_kind: str = "government",
    author: str | None = "Data Office",
    last_updated: date = TODAY,
    open_format: bool = True,
    license_present: bool = True,
    preprocessing_documented: bool = True,
    usage_count: int = 0,
) -> ProvenanceManifest:
    return ProvenanceManifest(
        source_kind=SourceKind(source_kind),
        author=author,
        last_updated=last_updated,
        open_format=open_format,
        license_present=license_present,
        preprocessing_documented=preprocessing_documented,
        usage_count=usage_count,
    )


def _place(values: list, assignments: list[tuple[int, object]]) -> list:
    """Swap entries so values[idx] == want for each (idx, want); duplicate
    wanted values never steal from an already-satisfied position."""
    values = list(values)
    done = set()
    for idx, want in assignments:
        if values[idx] == want:
            done.add(idx)
            continue
        j = next(
            k
            for k, v in enumerate(values)
            if v == want and k not in done and k != idx
        )
        values[idx], values[j] = values[j], values[idx]
        done.add(idx)
    return values


# ---------------------------------------------------------------------------
# Mutation-suite fixtures. All numeric columns are exactly symmetric
# multisets (zero skewness); rows carrying missing cells hold exact-mean or
# mirror-paired numeric values, and duplicated rows are mirror pairs, so
# cleaning mutations provably restore symmetry instead of breaking it.


def fixture_measurements() -> tuple[Dataset, Codebook]:
    """80 clean rows, five numeric channels, no impurities."""
    rng = np.random.default_rng(101)
    cols = {
        name: [str(v) for v in rng.permutation(np.arange(1, 81))]
        for name in ("alpha", "beta", "gamma", "delta", "epsilon")
    }
    codebook = make_codebook(
        {
            "alpha": ("first measurement channel", "continuous"),
            "beta": ("second measurement channel", "continuous"),
            "gamma": ("third measurement channel", "continuous"),
            "delta": ("fourth measurement channel", "continuous"),
            "epsilon": ("fifth measurement channel", "continuous"),
        }
    )
    return make_dataset(cols, "measurements"), codebook


def fixture_survey() -> tuple[Dataset, Codebook]:
    """60 survey rows plus 4 duplicates; 2 missing cells."""
    rng = np.random.default_rng(202)
    n = 60
    pid = [f"r{i:03d}" for i in range(n)]
    age = _place(
        rng.permutation(np.arange(18, 78)).tolist(),
        [(17, 20), (33, 75), (2, 30), (10, 65), (20, 40), (40, 55)],
    )
    cohort = [f"arm_{'abc'[i % 3]}" for i in range(n)]
    wellness = _place(
        rng.permutation(np.arange(1, 61)).tolist(),
        [(17, 5), (33, 56), (2, 10), (10, 51), (20, 20), (40, 41)],
    )
    pid[17] = ""
    cohort[33] = "NA"
    rows = list(zip(pid, map(str, age), cohort, map(str, wellness)))
    for src in (2, 10, 20, 40):
        rows.append(rows[src])
    cols = {
        k: [r[i] for r in rows]
        for i, k in enumerate(["pid", "age", "cohort", "wellness"])
    }
    codebook = make_codebook(
        {
            "pid": ("participant identifier", "text"),
            "age": ("years at interview", "continuous"),
            "cohort": ("assigned study arm", "categorical"),
            "wellness": ("composite wellbeing index", "continuous"),
        }
    )
    return make_dataset(cols, "survey"), codebook


def fixture_registry() -> tuple[Dataset, Codebook]:
    """52 registry rows plus 2 duplicates; 3 missing cells in non-numeric
    columns whose rows carry exact column means."""
    rng = np.random.default_rng(303)
    amounts = [500.0] * 4
    for k in range(1, 25):
        amounts.extend([500.0 - 8.25 * k, 500.0 + 8.25 * k])
    qtys = [25] * 4
    for k in range(1, 25):
        qtys.extend([25 - k, 25 + k])
    amount = _place(
        [str(v) for v in rng.permutation(np.array(amounts))],
        [
            (7, "500.0"),
            (13, "500.0"),
            (29, "500.0"),
            (0, str(500.0 - 8.25 * 5)),
            (4, str(500.0 + 8.25 * 5)),
        ],
    )
    qty = _place(
        [str(v) for v in rng.permutation(np.array(qtys)).astype(int)],
        [(7, "25"), (13, "25"), (29, "25"), (0, "10"), (4, "40")],
    )
    n = 52
    kind = [f"K{i % 5}" for i in range(n)]
    logged = [f"20{15 + (i % 5)}-0{1 + (i % 9)}-1{i % 10}" for i in range(n)]
    note = [f"entry {i}" for i in range(n)]
    kind[13] = "NA"
    logged[7] = "NULL"
    note[29] = ""
    rows = list(zip(kind, logged, amount, qty, note))
    rows.append(rows[0])
    rows.append(rows[4])
    cols = {
        k: [r[i] for r in rows]
        for i, k in enumerate(["kind", "logged", "amount", "qty", "note"])
    }
    codebook = make_codebook(
        {
            "kind": ("class kind of the record", "categorical"),
            "logged": ("day the item was logged", "date"),
            "amount": ("billed amount in dollars", "continuous"),
            "qty": ("shipped qty of units", "continuous"),
            "note": ("remark note for the entry", "text"),
        }
    )
    return make_dataset(cols, "registry"), codebook


SUITE_FIXTURES = (fixture_measurements, fixture_survey, fixture_registry)
