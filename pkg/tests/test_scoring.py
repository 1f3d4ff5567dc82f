import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from dqscore.errors import DegenerateInputError, SchemaError, ValidationError
from dqscore.ingredients import INGREDIENTS, IngredientVector
from dqscore.scoring import (
    DEFAULT_LOADINGS,
    WeightVector,
    dq_score,
    loadings_to_weights,
    refit_weights,
)

# Percentages the default loadings must reproduce, in ingredient order.
EXPECTED_DEFAULT_WEIGHTS = (
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


class TestLoadingsToWeights:
    def test_default_loadings_reproduce_published_percentages(self):
        weights = loadings_to_weights(DEFAULT_LOADINGS)
        for got, expected in zip(weights, EXPECTED_DEFAULT_WEIGHTS):
            assert got == pytest.approx(expected, abs=1e-6)

    def test_shifted_sum(self):
        assert math.fsum(v + 1 for v in DEFAULT_LOADINGS) == pytest.approx(
            10.986, abs=1e-9
        )

    def test_all_zero_loadings_uniform(self):
        weights = loadings_to_weights([0.0] * 9)
        assert all(w == pytest.approx(100 / 9, abs=1e-12) for w in weights)

    def test_two_element_toy(self):
        assert loadings_to_weights([0.5, -0.5]) == pytest.approx([75.0, 25.0])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValidationError):
            loadings_to_weights([1.2] + [0.0] * 8)

    def test_all_minus_one_rejected(self):
        with pytest.raises(ValidationError):
            loadings_to_weights([-1.0, -1.0])

    @given(
        st.lists(
            st.floats(min_value=-0.999, max_value=1.0), min_size=1, max_size=12
        )
    )
    @settings(max_examples=80)
    def test_sum_and_positivity_property(self, loadings):
        weights = loadings_to_weights(loadings)
        assert math.fsum(weights) == pytest.approx(100.0, abs=1e-9)
        assert all(w > 0 for w in weights)


class TestWeightVector:
    def test_default_sums_to_100(self):
        assert math.fsum(WeightVector.default().values) == pytest.approx(
            100.0, abs=1e-9
        )

    def test_json_roundtrip(self):
        weights = WeightVector.default()
        again = WeightVector.from_json(weights.to_json())
        assert again.values == pytest.approx(weights.values, abs=1e-9)

    def test_file_order_is_significant(self):
        rows = json.loads(WeightVector.default().to_json())
        rows[0], rows[1] = rows[1], rows[0]
        with pytest.raises(SchemaError, match="out of order"):
            WeightVector.from_json(json.dumps(rows))

    def test_file_sum_validated(self):
        rows = json.loads(WeightVector.default().to_json())
        rows[0]["weight"] += 0.5
        with pytest.raises(ValidationError, match="sum"):
            WeightVector.from_json(json.dumps(rows))

    def test_wrong_count_rejected(self):
        with pytest.raises(ValidationError):
            WeightVector((50.0, 50.0))


def _vector(scores: dict) -> IngredientVector:
    defaults = {name: 100.0 for name in INGREDIENTS}
    defaults.update(scores)
    return IngredientVector(**defaults)


class TestDqScore:
    def test_all_hundred(self):
        score = dq_score(_vector({}), WeightVector.default())
        assert score == pytest.approx(100.0, abs=1e-9)

    def test_all_zero(self):
        zeros = IngredientVector(**{name: 0.0 for name in INGREDIENTS})
        assert dq_score(zeros, WeightVector.default()) == pytest.approx(0.0)

    def test_zero_un_correlation(self):
        score = dq_score(_vector({"un_correlation": 0.0}), WeightVector.default())
        assert score == pytest.approx(100 - 6.572000728, abs=1e-6)

    def test_renormalizes_over_assessed(self):
        vector = IngredientVector(non_missing=80.0, non_duplicate=100.0)
        weights = WeightVector.default()
        w_missing = weights.get("non_missing")
        w_duplicate = weights.get("non_duplicate")
        expected = (80 * w_missing + 100 * w_duplicate) / (w_missing + w_duplicate)
        assert dq_score(vector, weights) == pytest.approx(expected, abs=1e-12)

    def test_empty_assessed_raises(self):
        with pytest.raises(DegenerateInputError):
            dq_score(IngredientVector(), WeightVector.default())

    @given(
        st.dictionaries(
            st.sampled_from(INGREDIENTS),
            st.floats(min_value=0, max_value=100),
            min_size=1,
        )
    )
    @settings(max_examples=80)
    def test_weighted_mean_bounds(self, scores):
        vector = IngredientVector(**scores)
        score = dq_score(vector, WeightVector.default())
        assert min(scores.values()) - 1e-9 <= score <= max(scores.values()) + 1e-9

    @given(
        st.sampled_from(INGREDIENTS),
        st.floats(min_value=0, max_value=99),
        st.floats(min_value=0.01, max_value=10),
    )
    @settings(max_examples=80)
    def test_monotone_in_each_ingredient(self, name, base, bump):
        lower = _vector({name: base})
        higher = _vector({name: min(100.0, base + bump)})
        weights = WeightVector.default()
        assert dq_score(higher, weights) >= dq_score(lower, weights)


class TestRefitWeights:
    def test_agrees_with_eigh_oracle_on_random_matrices(self):
        rng = np.random.default_rng(42)
        for _ in range(25):
            matrix = rng.uniform(0, 100, size=(50, 9))
            weights, loadings = refit_weights(matrix)
            oracle = oracles.first_pc_eigh(matrix)
            if math.fsum(oracle.tolist()) < 0:
                oracle = -oracle
            np.testing.assert_allclose(loadings, oracle, atol=1e-8)
            assert math.fsum(weights.values) == pytest.approx(100.0, abs=1e-9)

    def test_two_perfectly_correlated_columns(self):
        rng = np.random.default_rng(3)
        base = rng.uniform(10, 90, size=120)
        matrix = np.full((120, 9), 50.0)
        matrix[:, 2] = base
        matrix[:, 5] = base  # perfectly correlated with column 2
        _, loadings = refit_weights(matrix)
        assert loadings[2] == pytest.approx(1 / math.sqrt(2), abs=1e-9)
        assert loadings[5] == pytest.approx(1 / math.sqrt(2), abs=1e-9)
        for i in (0, 1, 3, 4, 6, 7, 8):
            assert loadings[i] == pytest.approx(0.0, abs=1e-12)

    def test_single_varying_column(self):
        matrix = np.full((30, 9), 20.0)
        matrix[:, 4] = np.linspace(0, 100, 30)
        _, loadings = refit_weights(matrix)
        assert loadings[4] == pytest.approx(1.0, abs=1e-12)
        assert all(abs(loadings[i]) < 1e-12 for i in range(9) if i != 4)

    def test_identity_covariance_is_a_unit_vector(self):
        # equal eigenvalues make any unit vector a valid first component;
        # require only that the result is a unit-norm near-eigenvector
        rng = np.random.default_rng(11)
        matrix = rng.uniform(0, 100, size=(5000, 9))
        _, loadings = refit_weights(matrix)
        vec = np.array(loadings)
        assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-9)

    def test_all_constant_rejected(self):
        with pytest.raises(DegenerateInputError):
            refit_weights(np.full((10, 9), 42.0))

    def test_too_few_rows_rejected(self):
        with pytest.raises(ValidationError):
            refit_weights(np.zeros((1, 9)))

    def test_out_of_range_scores_rejected(self):
        bad = np.full((5, 9), 50.0)
        bad[0, 0] = 101.0
        with pytest.raises(ValidationError):
            refit_weights(bad)

    def test_deterministic(self):
        rng = np.random.default_rng(9)
        matrix = rng.uniform(0, 100, size=(40, 9))
        assert refit_weights(matrix)[1] == refit_weights(matrix.copy())[1]
