"""Core objects for local rule + feature-importance explanations.

A rule is a conjunction of per-feature predicates implying a predicted
class; a predicate constrains one feature either to a (possibly half-open)
numeric interval or to a set of category labels. An instance is covered by
a rule when every predicate holds for the instance's value of that feature.
Feature importance is a list of signed per-feature weights; features are
ranked by the absolute value of their weight.

Everything here is immutable after construction and safe to share across
threads. Constructors enforce only local representability (an interval
needs at least one bound, a category set is nonempty); cross-object
invariants such as schema membership, coverage and prediction consistency
are checked by :func:`validate_bundle`, which reports violations as data
rather than raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence, Union

from .errors import SchemaMismatchError

__all__ = [
    "FeatureKind",
    "FeatureSpec",
    "DatasetSchema",
    "Instance",
    "NumericInterval",
    "CategorySet",
    "Predicate",
    "Rule",
    "FeatureWeight",
    "ExplanationBundle",
    "Violation",
    "ValidationReport",
    "covers",
    "rank_by_importance",
    "validate_bundle",
]


class FeatureKind(str, Enum):
    NUMERICAL = "numerical"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class FeatureSpec:
    """One column of the tabular data: a name, a kind, and its domain.

    Numerical features carry a closed range ``(lo, hi)`` in feature units;
    categorical features carry an ordered tuple of distinct labels.
    """

    name: str
    kind: FeatureKind
    domain: tuple

    def __post_init__(self):
        if not self.name:
            raise ValueError("feature name must be nonempty")
        if self.kind is FeatureKind.NUMERICAL:
            if len(self.domain) != 2:
                raise ValueError(f"{self.name}: numerical domain must be (lo, hi)")
            lo, hi = (float(self.domain[0]), float(self.domain[1]))
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"{self.name}: numerical domain bounds must be finite")
            if lo > hi:
                raise ValueError(f"{self.name}: domain lo > hi")
            object.__setattr__(self, "domain", (lo, hi))
        else:
            labels = tuple(str(v) for v in self.domain)
            if not labels:
                raise ValueError(f"{self.name}: categorical domain must be nonempty")
            if len(set(labels)) != len(labels):
                raise ValueError(f"{self.name}: duplicate category labels")
            object.__setattr__(self, "domain", labels)

    @property
    def is_numerical(self) -> bool:
        return self.kind is FeatureKind.NUMERICAL


@dataclass(frozen=True)
class DatasetSchema:
    """Ordered feature specs plus the target column name and its classes."""

    features: tuple[FeatureSpec, ...]
    target_name: str
    target_classes: tuple[str, ...]
    id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "target_classes", tuple(str(c) for c in self.target_classes))
        if not self.features:
            raise ValueError("schema needs at least one feature")
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise ValueError("duplicate feature names in schema")
        if self.target_name in names:
            raise ValueError(f"target {self.target_name!r} collides with a feature name")
        if not self.target_classes:
            raise ValueError("schema needs at least one target class")

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def feature(self, name: str) -> FeatureSpec:
        for f in self.features:
            if f.name == name:
                return f
        raise SchemaMismatchError(f"unknown feature {name!r}", path=f"features.{name}")

    def has_feature(self, name: str) -> bool:
        return any(f.name == name for f in self.features)


@dataclass(frozen=True)
class Instance:
    """One data point: a map from feature name to its observed value."""

    values: Mapping[str, object]

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))

    def __getitem__(self, feature: str):
        return self.values[feature]


@dataclass(frozen=True)
class NumericInterval:
    """Closed-by-default numeric interval; either end may be unbounded (None).

    ``lower_open``/``upper_open`` mark strict bounds kept from source text
    such as ``age < 31``; coverage then compares with ``<`` instead of ``<=``.
    """

    lower: Optional[float] = None
    upper: Optional[float] = None
    lower_open: bool = False
    upper_open: bool = False

    def __post_init__(self):
        lo = None if self.lower is None else float(self.lower)
        hi = None if self.upper is None else float(self.upper)
        if lo is None and hi is None:
            raise ValueError("interval needs at least one bound")
        for b in (lo, hi):
            if b is not None and not math.isfinite(b):
                raise ValueError("interval bounds must be finite")
        if lo is not None and hi is not None and lo > hi:
            raise ValueError(f"interval lower {lo} > upper {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def contains(self, value: float) -> bool:
        if self.lower is not None:
            if self.lower_open:
                if not value > self.lower:
                    return False
            elif not value >= self.lower:
                return False
        if self.upper is not None:
            if self.upper_open:
                if not value < self.upper:
                    return False
            elif not value <= self.upper:
                return False
        return True

    def intersect(self, other: "NumericInterval") -> Optional["NumericInterval"]:
        """Intersection of two intervals, or None when it is empty."""
        lo, lo_open = self.lower, self.lower_open
        if other.lower is not None and (lo is None or other.lower > lo
                                        or (other.lower == lo and other.lower_open)):
            lo, lo_open = other.lower, other.lower_open
        hi, hi_open = self.upper, self.upper_open
        if other.upper is not None and (hi is None or other.upper < hi
                                        or (other.upper == hi and other.upper_open)):
            hi, hi_open = other.upper, other.upper_open
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and (lo_open or hi_open)):
                return None
        return NumericInterval(lo, hi, lo_open, hi_open)


@dataclass(frozen=True)
class CategorySet:
    """Admissible category labels for one feature."""

    labels: frozenset[str]

    def __post_init__(self):
        labels = frozenset(str(v) for v in self.labels)
        if not labels:
            raise ValueError("category set must be nonempty")
        object.__setattr__(self, "labels", labels)

    def contains(self, value: str) -> bool:
        return value in self.labels

    def intersect(self, other: "CategorySet") -> Optional["CategorySet"]:
        common = self.labels & other.labels
        return CategorySet(common) if common else None


PredicateBody = Union[NumericInterval, CategorySet]


@dataclass(frozen=True)
class Predicate:
    """One conjunct of a rule premise: a condition on a single feature."""

    feature: str
    body: PredicateBody

    def satisfied_by(self, value) -> bool:
        if isinstance(self.body, NumericInterval):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise SchemaMismatchError(
                    f"interval predicate on {self.feature!r} but value is not numeric",
                    path=f"premise.{self.feature}",
                )
            return self.body.contains(float(value))
        return self.body.contains(str(value))


@dataclass(frozen=True)
class Rule:
    """Conjunction of predicates implying a predicted class.

    An empty premise is the vacuous conjunction and covers everything.
    Duplicate features in the premise are representable (so validation can
    report them) but parsers intersect duplicates away at ingest.
    """

    premise: tuple[Predicate, ...]
    consequence: str

    def __post_init__(self):
        object.__setattr__(self, "premise", tuple(self.premise))

    @property
    def premise_features(self) -> tuple[str, ...]:
        return tuple(p.feature for p in self.premise)

    def predicate_for(self, feature: str) -> Optional[Predicate]:
        for p in self.premise:
            if p.feature == feature:
                return p
        return None


@dataclass(frozen=True)
class FeatureWeight:
    """Signed, unitless relevance of one feature to one prediction."""

    feature: str
    weight: float

    def __post_init__(self):
        object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True)
class ExplanationBundle:
    """One instance with its prediction, explaining rule, and FI weights."""

    id: str
    schema_ref: str
    instance: Instance
    prediction: str
    rule: Rule
    importance: tuple[FeatureWeight, ...]

    def __post_init__(self):
        object.__setattr__(self, "importance", tuple(self.importance))

    def weight_for(self, feature: str) -> float:
        """Weight for `feature`, treating features absent from the FI list as 0."""
        for fw in self.importance:
            if fw.feature == feature:
                return fw.weight
        return 0.0


def covers(instance: Instance, rule: Rule) -> bool:
    """True iff every premise predicate is satisfied by the instance.

    Interval endpoints are inclusive unless flagged open; unbounded ends
    impose no constraint. A predicate naming a feature the instance does
    not carry raises :class:`SchemaMismatchError`.
    """
    for pred in rule.premise:
        if pred.feature not in instance.values:
            raise SchemaMismatchError(
                f"predicate on unknown feature {pred.feature!r}",
                path=f"premise.{pred.feature}",
            )
        if not pred.satisfied_by(instance.values[pred.feature]):
            return False
    return True


def rank_by_importance(importance: Sequence[FeatureWeight]) -> list[FeatureWeight]:
    """Sort weights by decreasing |weight|, stable: ties keep input order."""
    return sorted(importance, key=lambda fw: -abs(fw.weight))


@dataclass(frozen=True)
class Violation:
    """One broken invariant; mirrors the service error shape."""

    code: str
    message: str
    path: str = ""

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "path": self.path}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "violations", tuple(self.violations))

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


def _check_instance(bundle: ExplanationBundle, schema: DatasetSchema, out: list):
    values = bundle.instance.values
    for spec in schema.features:
        if spec.name not in values:
            out.append(Violation("missing_value", f"instance has no value for {spec.name!r}",
                                 f"instance.{spec.name}"))
            continue
        v = values[spec.name]
        if spec.is_numerical:
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                out.append(Violation("kind_mismatch",
                                     f"{spec.name!r} expects a number, got {type(v).__name__}",
                                     f"instance.{spec.name}"))
            elif not math.isfinite(float(v)):
                out.append(Violation("non_finite", f"{spec.name!r} value is not finite",
                                     f"instance.{spec.name}"))
        else:
            if not isinstance(v, str):
                out.append(Violation("kind_mismatch",
                                     f"{spec.name!r} expects a label, got {type(v).__name__}",
                                     f"instance.{spec.name}"))
            elif v not in spec.domain:
                out.append(Violation("unknown_label",
                                     f"{v!r} not in the domain of {spec.name!r}",
                                     f"instance.{spec.name}"))
    for name in values:
        if not schema.has_feature(name):
            out.append(Violation("unknown_feature", f"instance value for unknown feature {name!r}",
                                 f"instance.{name}"))


def _check_rule(bundle: ExplanationBundle, schema: DatasetSchema, out: list):
    seen = set()
    for i, pred in enumerate(bundle.rule.premise):
        path = f"rule.premise[{i}]"
        if pred.feature in seen:
            out.append(Violation("duplicate_predicate",
                                 f"more than one predicate on {pred.feature!r}", path))
        seen.add(pred.feature)
        if not schema.has_feature(pred.feature):
            out.append(Violation("unknown_feature",
                                 f"predicate on unknown feature {pred.feature!r}", path))
            continue
        spec = schema.feature(pred.feature)
        if spec.is_numerical != isinstance(pred.body, NumericInterval):
            out.append(Violation("kind_mismatch",
                                 f"predicate body kind does not match {pred.feature!r}", path))
            continue
        if isinstance(pred.body, CategorySet):
            extra = pred.body.labels - set(spec.domain)
            if extra:
                out.append(Violation("unknown_label",
                                     f"labels {sorted(extra)!r} not in the domain of {pred.feature!r}",
                                     path))
    if bundle.rule.consequence not in schema.target_classes:
        out.append(Violation("unknown_class",
                             f"consequence {bundle.rule.consequence!r} is not a target class",
                             "rule.consequence"))


def _check_importance(bundle: ExplanationBundle, schema: DatasetSchema, out: list):
    seen = set()
    for i, fw in enumerate(bundle.importance):
        path = f"importance[{i}]"
        if fw.feature in seen:
            out.append(Violation("duplicate_weight",
                                 f"more than one weight for {fw.feature!r}", path))
        seen.add(fw.feature)
        if not schema.has_feature(fw.feature):
            out.append(Violation("unknown_feature",
                                 f"weight for unknown feature {fw.feature!r}", path))
        if not math.isfinite(fw.weight):
            out.append(Violation("non_finite", f"weight for {fw.feature!r} is not finite", path))


def validate_bundle(bundle: ExplanationBundle, schema: DatasetSchema) -> ValidationReport:
    """Report every broken invariant of the bundle against the schema.

    Includes the local-coverage check: a rule explaining an instance's own
    outcome must cover that instance. Never mutates its input; an empty
    report means the bundle is valid.
    """
    out: list[Violation] = []
    _check_instance(bundle, schema, out)
    _check_rule(bundle, schema, out)
    _check_importance(bundle, schema, out)
    if bundle.prediction not in schema.target_classes:
        out.append(Violation("unknown_class",
                             f"prediction {bundle.prediction!r} is not a target class",
                             "prediction"))
    if bundle.prediction != bundle.rule.consequence:
        out.append(Violation("prediction_mismatch",
                             "prediction differs from the rule consequence", "prediction"))
    # Coverage only makes sense once features/kinds line up.
    structural = {"unknown_feature", "kind_mismatch", "missing_value"}
    if not any(v.code in structural for v in out):
        if not covers(bundle.instance, bundle.rule):
            out.append(Violation("not_covered",
                                 "instance is not covered by its own rule", "rule"))
    return ValidationReport(tuple(out))
