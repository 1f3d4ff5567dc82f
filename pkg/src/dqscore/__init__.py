"""dqscore: nine-ingredient data-quality scoring with a nutrition-style label."""

from .config import DEFAULT_THRESHOLDS, Thresholds
from .errors import (
    DegenerateInputError,
    DQError,
    EmptyInputError,
    IngredientNotAssessed,
    NotNumericError,
    ParseError,
    SchemaError,
    UsageError,
    ValidationError,
)
from .ingredients import (
    INGREDIENTS,
    EvidenceDetail,
    IngredientVector,
    categorical_consistency_score,
    characteristics_score,
    compute_all,
    correlation_score,
    duplicate_score,
    metadata_coupling_score,
    missing_score,
    provenance_score,
    skewness_score,
    uniformity_score,
)
from .mutation import (
    MutationKind,
    MutationResult,
    MutationSpec,
    apply_mutation,
    run_monotonicity_suite,
)
from .report import (
    ComprehensiveReport,
    QualityLabel,
    build_label,
    build_report,
    label_from_json,
    render_label,
    render_report,
)
from .scoring import (
    DEFAULT_LOADINGS,
    WeightVector,
    dq_score,
    loadings_to_weights,
    refit_weights,
)
from .tabular import (
    CellKind,
    Codebook,
    CodebookEntry,
    Column,
    Dataset,
    DeclaredType,
    ParseOptions,
    ProvenanceManifest,
    ReferenceStats,
    SourceKind,
    StatsSummary,
    column_stats,
    infer_cell_kind,
    parse_codebook,
    parse_dataset,
    parse_manifest,
    parse_reference_stats,
    serialize_codebook,
    serialize_dataset,
)
from .textsim import (
    ALGORITHMS,
    char_similarity,
    feature_similarity,
    hybrid_score,
    phonetic_similarity,
    preprocess,
    similarity_profile,
    token_similarity,
)

__version__ = "0.1.0"
