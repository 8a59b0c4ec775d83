"""fiper: visual explanations combining local rules with feature importance."""

from .model import (
    CategorySet,
    DatasetSchema,
    ExplanationBundle,
    FeatureKind,
    FeatureSpec,
    FeatureWeight,
    Instance,
    NumericInterval,
    Predicate,
    Rule,
    ValidationReport,
    covers,
    rank_by_importance,
    validate_bundle,
)

__version__ = "0.1.0"
