"""Exception hierarchy for the scoring engine."""


class DQError(Exception):
    """Base class for every error raised by this package."""


class ParseError(DQError):
    """Structurally malformed input (bad CSV, bad JSON, bad encoding).

    ``row`` numbers rows within the file, the header being row 0, so the
    first data row is row 1.
    """

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class SchemaError(DQError):
    """Well-formed input whose contents violate the documented schema."""


class EmptyInputError(DQError):
    """Input contains no usable content at all."""


class DegenerateInputError(DQError):
    """Input too small or too uniform for the requested computation."""


class NotNumericError(DQError):
    """Numeric statistics requested on a column with no numeric cells."""


class ValidationError(DQError):
    """Semantically invalid value (future date, out-of-range loading, ...)."""


class IngredientNotAssessed(DQError):
    """An ingredient's preconditions are not met; carries the reason."""


class UsageError(DQError):
    """Command-line misuse (missing flag, unknown format); exit code 2."""
