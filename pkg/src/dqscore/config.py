"""Tunable thresholds used by the ingredient computations."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class Thresholds:
    """Knobs with documented defaults; every score formula reads from here.

    correlation_cutoff        |r| at or above which a column pair counts as
                              highly correlated.
    skew_saturation           |g1| at which a column's skew score bottoms
                              out at zero.
    coupling_suggestion       coupling below this triggers a report
                              suggestion for the column.
    categorical_distinct_ratio / categorical_distinct_count
                              a numeric column is detected as continuous
                              when distinct/non-missing exceeds the ratio or
                              the distinct count exceeds the count.
    recency_window_years      provenance recency decays linearly to zero
                              over this many years.
    usage_log_divisor         community-source origin credit is
                              log10(1 + usages) / divisor, capped at 1.
    """

    correlation_cutoff: float = 0.8
    skew_saturation: float = 2.0
    coupling_suggestion: float = 0.5
    categorical_distinct_ratio: float = 0.5
    categorical_distinct_count: int = 20
    recency_window_years: float = 10.0
    usage_log_divisor: float = 4.0

    def __post_init__(self):
        if not 0.0 < self.correlation_cutoff <= 1.0:
            raise ValidationError("correlation_cutoff must be in (0, 1]")
        if self.skew_saturation <= 0.0:
            raise ValidationError("skew_saturation must be positive")
        if not 0.0 <= self.coupling_suggestion <= 1.0:
            raise ValidationError("coupling_suggestion must be in [0, 1]")
        if not 0.0 < self.categorical_distinct_ratio <= 1.0:
            raise ValidationError("categorical_distinct_ratio must be in (0, 1]")
        if self.categorical_distinct_count < 1:
            raise ValidationError("categorical_distinct_count must be >= 1")
        if self.recency_window_years <= 0.0:
            raise ValidationError("recency_window_years must be positive")
        if self.usage_log_divisor <= 0.0:
            raise ValidationError("usage_log_divisor must be positive")


DEFAULT_THRESHOLDS = Thresholds()
