"""Weight derivation from principal-component loadings and the DQ score.

Loadings in [-1, 1] are shifted by +1 and normalized so the nine weights
sum to 100. The default weights shipped with the engine come from
:data:`DEFAULT_LOADINGS`; :func:`refit_weights` re-derives loadings from a
training matrix of ingredient scores via the first principal component of
the standardized columns.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, SchemaError, ValidationError
from .ingredients import INGREDIENTS, IngredientVector

#: Principal-component loadings behind the default weight vector, one per
#: ingredient in canonical order. Refit with :func:`refit_weights` to adapt
#: the metric to a different training corpus.
DEFAULT_LOADINGS = (
    0.066,   # provenance
    0.867,   # uniformity
    0.87,    # dataset_characteristics
    -0.059,  # metadata_coupling
    -0.205,  # non_duplicate
    0.108,   # non_missing
    0.702,   # un_skewness
    -0.085,  # categorical_consistency
    -0.278,  # un_correlation
)

_WEIGHT_FILE_TOLERANCE = 1e-6


def loadings_to_weights(loadings: Sequence[float]) -> list[float]:
    """Shift every loading by +1 and normalize to percentages of 100."""
    values = [float(v) for v in loadings]
    if not values:
        raise ValidationError("loadings are empty")
    for v in values:
        if not -1.0 <= v <= 1.0:
            raise ValidationError(f"loading {v} outside [-1, 1]")
    shifted = [v + 1.0 for v in values]
    total = math.fsum(shifted)
    if total == 0.0:
        raise ValidationError("all loadings are -1; weights are undefined")
    return [100.0 * s / total for s in shifted]


@dataclass(frozen=True)
class WeightVector:
    """Nine non-negative percentages summing to 100, canonical order.

    Inputs may be off by up to 1e-6 (hand-copied rounded percentages);
    they are renormalized on construction so the stored values always sum
    to 100 to within float accuracy.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(INGREDIENTS):
            raise ValidationError(
                f"expected {len(INGREDIENTS)} weights, got {len(self.values)}"
            )
        for v in self.values:
            if v < 0.0:
                raise ValidationError(f"negative weight {v}")
        total = math.fsum(self.values)
        if abs(total - 100.0) > _WEIGHT_FILE_TOLERANCE:
            raise ValidationError(f"weights sum to {total}, expected 100")
        object.__setattr__(
            self, "values", tuple(100.0 * v / total for v in self.values)
        )

    @classmethod
    def from_loadings(cls, loadings: Sequence[float]) -> "WeightVector":
        if len(loadings) != len(INGREDIENTS):
            raise ValidationError(
                f"expected {len(INGREDIENTS)} loadings, got {len(loadings)}"
            )
        return cls(tuple(loadings_to_weights(loadings)))

    @classmethod
    def default(cls) -> "WeightVector":
        return cls.from_loadings(DEFAULT_LOADINGS)

    @property
    def by_ingredient(self) -> dict[str, float]:
        return dict(zip(INGREDIENTS, self.values))

    def get(self, ingredient: str) -> float:
        return self.by_ingredient[ingredient]

    def to_json(self) -> str:
        rows = [
            {"ingredient": name, "weight": weight}
            for name, weight in zip(INGREDIENTS, self.values)
        ]
        return json.dumps(rows, indent=2) + "\n"

    @classmethod
    def from_json(cls, data) -> "WeightVector":
        """Load a weights file: JSON array of {ingredient, weight} in
        canonical order; the sum is validated then renormalized exactly."""
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        try:
            rows = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"weights file is not valid JSON: {exc}") from None
        if not isinstance(rows, list):
            raise SchemaError("weights file must be a JSON array")
        if len(rows) != len(INGREDIENTS):
            raise SchemaError(
                f"weights file has {len(rows)} entries, expected {len(INGREDIENTS)}"
            )
        values = []
        for expected, row in zip(INGREDIENTS, rows):
            if not isinstance(row, dict) or set(row) != {"ingredient", "weight"}:
                raise SchemaError(
                    "each weights entry must be {ingredient, weight}"
                )
            if row["ingredient"] != expected:
                raise SchemaError(
                    f'weights entry {row["ingredient"]!r} out of order, '
                    f"expected {expected!r}"
                )
            weight = row["weight"]
            if isinstance(weight, bool) or not isinstance(weight, (int, float)):
                raise SchemaError(f"weight for {expected} must be a number")
            if weight < 0:
                raise ValidationError(f"negative weight for {expected}")
            values.append(float(weight))
        return cls(tuple(values))


# --------------------------------------------------------------------------
# Refitting weights from a training matrix


def _first_principal_component(
    covariance: np.ndarray,
    tol: float = 1e-12,
    vector_tol: float = 1e-13,
    max_iterations: int = 10_000,
) -> np.ndarray:
    """Dominant eigenvector of a PSD matrix by power iteration.

    Converges when both the relative eigenvalue change drops below ``tol``
    and the vector stops moving (the eigenvalue alone converges at the
    square of the vector rate, so stopping on it leaves the vector short
    of oracle accuracy). The start vector is seeded deterministically.
    """
    size = covariance.shape[0]
    rng = np.random.default_rng(0x5EED)
    vector = rng.standard_normal(size)
    vector /= np.linalg.norm(vector)
    eigenvalue = 0.0
    for _ in range(max_iterations):
        product = covariance @ vector
        norm = np.linalg.norm(product)
        if norm == 0.0:
            # start vector lies in the null space; re-draw
            vector = rng.standard_normal(size)
            vector /= np.linalg.norm(vector)
            continue
        product /= norm
        new_eigenvalue = float(product @ covariance @ product)
        eigen_settled = abs(new_eigenvalue - eigenvalue) <= tol * max(
            1.0, abs(new_eigenvalue)
        )
        vector_settled = float(np.max(np.abs(product - vector))) <= vector_tol
        vector, eigenvalue = product, new_eigenvalue
        if eigen_settled and vector_settled:
            break
    return vector


def _orient(loadings: np.ndarray) -> np.ndarray:
    """Fix the arbitrary eigenvector sign: non-negative loading sum, with
    the first nonzero loading positive as the tie-break at exactly zero."""
    total = math.fsum(loadings.tolist())
    if total < 0.0:
        return -loadings
    if total == 0.0:
        for v in loadings:
            if v != 0.0:
                return loadings if v > 0.0 else -loadings
    return loadings


def refit_weights(training) -> tuple[WeightVector, tuple[float, ...]]:
    """Derive (weights, loadings) from a training matrix of ingredient
    scores (rows = datasets, columns = the nine ingredients in order).

    Columns are z-score standardized (zero-variance columns become all
    zeros and get loading 0), the first principal component of the
    standardized covariance is taken as the loadings vector, and the
    loadings pass through :func:`loadings_to_weights`.
    """
    X = np.asarray(training, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(INGREDIENTS):
        raise ValidationError(
            f"training matrix must have {len(INGREDIENTS)} columns"
        )
    if X.shape[0] < 2:
        raise ValidationError("training matrix needs at least 2 rows")
    if not np.all(np.isfinite(X)):
        raise ValidationError("training matrix contains non-finite values")
    if np.any(X < 0.0) or np.any(X > 100.0):
        raise ValidationError("training scores must lie in [0, 100]")
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    nonzero = stds > 0.0
    if not np.any(nonzero):
        raise DegenerateInputError("every training column has zero variance")
    Z = np.zeros_like(X)
    Z[:, nonzero] = (X[:, nonzero] - means[nonzero]) / stds[nonzero]
    covariance = (Z.T @ Z) / (X.shape[0] - 1)
    component = _orient(_first_principal_component(covariance))
    loadings = tuple(float(v) for v in component)
    return WeightVector.from_loadings(loadings), loadings


# --------------------------------------------------------------------------
# The DQ score


def dq_score(ingredients: IngredientVector, weights: WeightVector) -> float:
    """Weighted mean of the assessed ingredient scores.

    Weights are restricted to the assessed ingredients and renormalized,
    so the score stays on the [0, 100] scale when inputs were absent.
    """
    assessed = ingredients.assessed
    if not assessed:
        raise DegenerateInputError("no ingredients were assessed")
    by_name = weights.by_ingredient
    active = [(by_name[name], ingredients.get(name)) for name in assessed]
    total_weight = math.fsum(w for w, _ in active)
    if total_weight == 0.0:
        raise DegenerateInputError(
            "assessed ingredients all carry zero weight"
        )
    return math.fsum(w * s for w, s in active) / total_weight
