"""Acceptance suite: one test per shipping criterion, each printing a
PASS/FAIL line (run with -s to see them).

Run just this module:  pytest tests/test_acceptance.py -v -s
"""

import json
import math
import random
import time

import numpy as np
import pytest

import oracles
from dqscore.cli import run
from dqscore.ingredients import (
    INGREDIENTS,
    compute_all,
    correlation_score,
    duplicate_score,
    missing_score,
    skewness_score,
    uniformity_score,
)
from dqscore.mutation import MutationKind, MutationSpec, apply_mutation
from dqscore.scoring import (
    DEFAULT_LOADINGS,
    WeightVector,
    dq_score,
    loadings_to_weights,
    refit_weights,
)
from dqscore.tabular import column_stats, serialize_codebook, serialize_dataset
from dqscore.textsim import (
    feature_similarity,
    lcs,
    levenshtein,
    needleman_wunsch,
    smith_waterman,
    token_similarity,
)
from helpers import (
    SUITE_FIXTURES,
    TODAY,
    make_codebook,
    make_dataset,
    make_manifest,
)

PRINTED_WEIGHT_PERCENTAGES = (
    9.703258693,
    16.99435645,
    17.02166394,
    8.565446932,
    7.236482796,
    10.08556344,
    15.49244493,
    8.328782086,
    6.572000728,
)


def _verdict(number: int, name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f"  [{detail}]" if detail else ""
    print(f"acceptance {number} ({name}): {status}{suffix}")
    assert ok, f"acceptance criterion {number} ({name}) failed {suffix}"


def test_criterion_1_default_weight_transform():
    loadings_to_weights(DEFAULT_LOADINGS)  # warm-up
    start = time.perf_counter()
    repeats = 100
    for _ in range(repeats):
        weights = loadings_to_weights(DEFAULT_LOADINGS)
    elapsed = (time.perf_counter() - start) / repeats
    exact = all(
        abs(got - expected) <= 1e-6
        for got, expected in zip(weights, PRINTED_WEIGHT_PERCENTAGES)
    )
    shifted_sum = math.fsum(v + 1.0 for v in DEFAULT_LOADINGS)
    sum_ok = abs(shifted_sum - 10.986) <= 1e-9
    time_ok = elapsed < 1e-3
    _verdict(
        1,
        "default loadings reproduce printed weights",
        exact and sum_ok and time_ok,
        f"avg {elapsed * 1e6:.1f}us/call",
    )


def test_criterion_2_similarity_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(987654)
    ok = True
    for _ in range(1000):
        a = "".join(rng.choice("abcde") for _ in range(rng.randrange(9)))
        b = "".join(rng.choice("abcde") for _ in range(rng.randrange(9)))
        ok &= levenshtein(a, b) == oracles.levenshtein_similarity(a, b)
        ok &= lcs(a, b) == oracles.lcs_similarity(a, b)
        ok &= needleman_wunsch(a, b) == oracles.needleman_wunsch_similarity(a, b)
        ok &= smith_waterman(a, b) == oracles.smith_waterman_similarity(a, b)
    vocabulary = ["age", "year", "income", "height", "zone", "code", "status"]
    for _ in range(1000):
        sa = set(rng.sample(vocabulary, rng.randrange(len(vocabulary) + 1)))
        sb = set(rng.sample(vocabulary, rng.randrange(len(vocabulary) + 1)))
        ok &= token_similarity("jaccard", list(sa), list(sb)) == oracles.jaccard_sets(sa, sb)
        ok &= feature_similarity("overlap", sa, sb) == oracles.overlap_sets(sa, sb)
        ok &= feature_similarity("tversky", sa, sb) == oracles.tversky_sets(sa, sb)
    elapsed = time.perf_counter() - start
    _verdict(
        2,
        "similarity algorithms match independent oracles",
        ok and elapsed < 10.0,
        f"{elapsed:.2f}s",
    )


def test_criterion_3_ingredient_unit_fixtures():
    failures = []

    ds = make_dataset(
        {
            "a": ["1", "NA", "3", "4", "5"],
            "b": ["1", "2", "", "4", "5"],
            "c": ["1", "2", "3", "null", "5"],
            "d": ["nan", "2", "3", "4", "n/a"],
        }
    )
    if missing_score(ds)[0] != 75.0:
        failures.append("25% missing != 75")

    ds = make_dataset({"v": list(range(8)) + [0, 1], "w": ["x"] * 10})
    if duplicate_score(ds)[0] != 80.0:
        failures.append("2-of-10 duplicates != 80")

    ds = make_dataset({"v": ["1", "2", "3", "4", "x", "y", "7", "8", "9", "10"]})
    cb = make_codebook({"v": ("value", "continuous")})
    if abs(uniformity_score(ds, cb)[0] - 80.0) > 1e-12:
        failures.append("2-text-in-10 uniformity != 80")

    ds = make_dataset({"x": [1, 2, 3, 4], "y": [1, 2, 3, 4]})
    if correlation_score(ds)[0] != 0.0:
        failures.append("y=x correlation != 0")

    score, detail = skewness_score(make_dataset({"v": [1, 2, 3, 4, 5]}))
    if score != 100.0 or detail.columns[0][1] != 0.0:
        failures.append("symmetric column skew score != 1")

    _verdict(3, "ingredient unit fixtures", not failures, "; ".join(failures))


def test_criterion_4_mutation_monotonicity():
    weights = WeightVector.default()
    failures = []

    def score_of(dataset, codebook):
        vector, _ = compute_all(dataset, codebook, None, None, today=TODAY)
        return dq_score(vector, weights)

    for build in SUITE_FIXTURES:
        dataset, codebook = build()
        name = dataset.name
        baseline = score_of(dataset, codebook)

        for kind in (MutationKind.INJECT_MISSING, MutationKind.INJECT_DUPLICATES):
            sequence = [baseline]
            for magnitude in (0.05, 0.10, 0.20):
                result = apply_mutation(
                    dataset, codebook, MutationSpec(kind, magnitude, seed=1)
                )
                sequence.append(score_of(result.dataset, result.codebook))
            if not all(sequence[i] > sequence[i + 1] for i in range(3)):
                failures.append(f"{name}/{kind.value} not strictly decreasing")

        for kind in (MutationKind.DEDUPLICATE, MutationKind.REMOVE_MISSING_ROWS):
            result = apply_mutation(
                dataset, codebook, MutationSpec(kind, 1.0, seed=1)
            )
            if not result.changed:
                continue  # fixture had no such impurity
            if score_of(result.dataset, result.codebook) <= baseline:
                failures.append(f"{name}/{kind.value} not strictly above baseline")

        result = apply_mutation(
            dataset, codebook, MutationSpec(MutationKind.IMPROVE_METADATA, 1.0, seed=1)
        )
        if score_of(result.dataset, result.codebook) < baseline:
            failures.append(f"{name}/improve_metadata lowered the score")

    _verdict(4, "mutation monotonicity", not failures, "; ".join(failures))


def test_criterion_5_pca_refit_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(1234)
    ok = True
    for _ in range(100):
        matrix = rng.uniform(0.0, 100.0, size=(50, 9))
        weights, loadings = refit_weights(matrix)
        oracle = oracles.first_pc_eigh(matrix)
        vec = np.asarray(loadings)
        aligned = oracle if float(vec @ oracle) >= 0 else -oracle
        ok &= bool(np.max(np.abs(vec - aligned)) <= 1e-8)
        ok &= abs(math.fsum(weights.values) - 100.0) <= 1e-9
    elapsed = time.perf_counter() - start
    _verdict(
        5, "weight refit matches eigendecomposition oracle",
        ok and elapsed < 5.0, f"{elapsed:.2f}s",
    )


def _perfect_inputs():
    ds = make_dataset(
        {"height": [1, 2, 3, 4, 5], "width": [2, 4, 1, 5, 3]}, name="perfect"
    )
    cb = make_codebook(
        {"height": ("height", "continuous"), "width": ("width", "continuous")}
    )
    manifest = make_manifest(last_updated=TODAY)
    reference = {
        name: column_stats(ds.column(name)).as_dict()
        for name in ("height", "width")
    }
    from dqscore.tabular import parse_reference_stats

    return ds, cb, manifest, parse_reference_stats(json.dumps(reference))


def test_criterion_6_perfect_dataset_identity():
    ds, cb, manifest, reference = _perfect_inputs()
    vector, _ = compute_all(ds, cb, manifest, reference, today=TODAY)
    all_hundred = all(vector.get(name) == 100.0 for name in INGREDIENTS)
    dq = dq_score(vector, WeightVector.default())
    _verdict(
        6,
        "perfect dataset scores 100 everywhere",
        all_hundred and abs(dq - 100.0) <= 1e-9,
        f"DQ={dq:.9f}",
    )


def test_criterion_7_determinism(tmp_path):
    ds, cb, manifest, reference = _perfect_inputs()
    (tmp_path / "d.csv").write_text(serialize_dataset(ds))
    (tmp_path / "c.csv").write_text(serialize_codebook(cb))
    (tmp_path / "m.json").write_text(
        json.dumps(
            {
                "source_kind": "government",
                "author": "Data Office",
                "last_updated": TODAY.isoformat(),
                "open_format": True,
                "license_present": True,
                "preprocessing_documented": True,
            }
        )
    )
    reference_payload = {
        name: column_stats(ds.column(name)).as_dict()
        for name in ("height", "width")
    }
    (tmp_path / "r.json").write_text(json.dumps(reference_payload))

    outputs = []
    for i, jobs in enumerate(("1", "1", "4")):
        out = tmp_path / f"out{i}.json"
        code = run(
            [
                "score",
                "--data", str(tmp_path / "d.csv"),
                "--codebook", str(tmp_path / "c.csv"),
                "--manifest", str(tmp_path / "m.json"),
                "--reference", str(tmp_path / "r.json"),
                "--today", TODAY.isoformat(),
                "--format", "json",
                "--jobs", jobs,
                "--out", str(out),
            ]
        )
        assert code == 0
        outputs.append(out.read_bytes())
    identical = outputs[0] == outputs[1] == outputs[2]
    _verdict(7, "byte-identical canonical JSON across runs and jobs", identical)


@pytest.mark.slow
def test_criterion_8_desk_scale_performance(tmp_path):
    import pandas as pd

    rows, cols = 100_000, 100
    rng = np.random.default_rng(8)
    frame = pd.DataFrame(
        rng.integers(0, 100_000, size=(rows, cols)),
        columns=[f"c{i:03d}" for i in range(cols)],
    )
    data_path = tmp_path / "big.csv"
    frame.to_csv(data_path, index=False)

    codebook_lines = ["column,description,declared_type"]
    for i in range(cols):
        codebook_lines.append(f"c{i:03d},synthetic channel number {i},continuous")
    codebook_path = tmp_path / "big_codebook.csv"
    codebook_path.write_text("\n".join(codebook_lines) + "\n")
    manifest_path = tmp_path / "m.json"
    manifest_path.write_text(
        json.dumps(
            {
                "source_kind": "institutional",
                "author": "generator",
                "last_updated": TODAY.isoformat(),
                "open_format": True,
                "license_present": True,
                "preprocessing_documented": True,
            }
        )
    )
    out = tmp_path / "big_report.json"
    start = time.perf_counter()
    code = run(
        [
            "score",
            "--data", str(data_path),
            "--codebook", str(codebook_path),
            "--manifest", str(manifest_path),
            "--today", TODAY.isoformat(),
            "--format", "json",
            "--out", str(out),
        ]
    )
    elapsed = time.perf_counter() - start
    payload = json.loads(out.read_text())
    pair_count = len(payload["findings"]["correlated_pairs"])
    ok = code == 0 and elapsed < 60.0 and pair_count == cols * (cols - 1) // 2
    _verdict(
        8,
        "100k x 100 scoring under 60 s",
        ok,
        f"{elapsed:.1f}s, {pair_count} correlation pairs",
    )
