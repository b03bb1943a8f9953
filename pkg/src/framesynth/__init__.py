"""framesynth: rule-strict synthetic Wi-Fi frame datasets plus fidelity checks."""

from .fidelity import (
    FidelityReport,
    PcaModel,
    SimilaritySummary,
    build_fidelity_report,
    cosine_similarity,
    euclidean_distance,
    ks_per_feature,
    ks_statistic,
    pairwise_similarity_summary,
    pca_fit,
    pca_shared_projection,
)
from .generator import (
    CHECK_RULE_IDS,
    GenerationConfig,
    GenerationStats,
    InfeasibleRulesetError,
    ValidationReport,
    apply_label_overrides,
    check,
    emit_row,
    enforce_quotas,
    generate,
    match_percent,
    shuffle_dataset,
)
from .reference import reference_ruleset, reference_ruleset_text
from .ruleset import (
    DiscreteDistribution,
    GuardPredicate,
    LockRule,
    QuotaPolicy,
    Ruleset,
    RulesetDomainError,
    RulesetError,
    RulesetParseError,
    RulesetSchemaError,
    lint_ruleset,
    parse_ruleset,
    scaled_ruleset,
    serialize_ruleset,
)
from .sampling import Prng, draw_bernoulli, draw_categorical, draw_rssi
from .schema import CsvFormatError, Dataset, FrameRecord, decode_csv, encode_csv

__version__ = "0.1.0"

__all__ = [
    "CHECK_RULE_IDS",
    "CsvFormatError",
    "Dataset",
    "DiscreteDistribution",
    "FidelityReport",
    "FrameRecord",
    "GenerationConfig",
    "GenerationStats",
    "GuardPredicate",
    "InfeasibleRulesetError",
    "LockRule",
    "PcaModel",
    "Prng",
    "QuotaPolicy",
    "Ruleset",
    "RulesetDomainError",
    "RulesetError",
    "RulesetParseError",
    "RulesetSchemaError",
    "SimilaritySummary",
    "ValidationReport",
    "apply_label_overrides",
    "build_fidelity_report",
    "check",
    "cosine_similarity",
    "decode_csv",
    "draw_bernoulli",
    "draw_categorical",
    "draw_rssi",
    "emit_row",
    "encode_csv",
    "enforce_quotas",
    "euclidean_distance",
    "generate",
    "ks_per_feature",
    "ks_statistic",
    "lint_ruleset",
    "match_percent",
    "pairwise_similarity_summary",
    "parse_ruleset",
    "pca_fit",
    "pca_shared_projection",
    "reference_ruleset",
    "reference_ruleset_text",
    "scaled_ruleset",
    "serialize_ruleset",
    "shuffle_dataset",
    "__version__",
]
