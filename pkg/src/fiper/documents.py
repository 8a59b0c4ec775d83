"""Canonical JSON documents and CSV dataset loading.

Schema document::

    {"id": "german_credit",
     "target": {"name": "credit_risk", "classes": ["good", "bad"]},
     "features": [{"name": "age", "kind": "numerical", "domain": [19, 75]},
                  {"name": "purpose", "kind": "categorical",
                   "domain": ["education", "business"]}]}

Bundle document (one explanation per file)::

    {"id": "gc-001", "schema_ref": "german_credit",
     "instance": {"age": 23, "purpose": "education", ...},
     "prediction": "bad",
     "rule": {"premise": [{"feature": "age", "kind": "interval",
                           "lower": 19, "upper": 31}],
              "consequence": "bad"},
     "importance": [{"feature": "age", "weight": 0.1}, ...]}

``rule`` may alternatively be a rule-text string (see :mod:`fiper.ruletext`).
Structured premise entries use ``kind: "interval"`` with optional
``lower``/``upper``/``lower_open``/``upper_open``, or ``kind: "set"`` with
``labels``. Datasets are header-row CSV with one column per feature plus
the target column.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .errors import BundleValidationError, DocumentError
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
    validate_bundle,
)
from .ruletext import emit_rule_text, parse_rule_text

__all__ = [
    "parse_schema",
    "emit_schema",
    "parse_bundle",
    "emit_bundle",
    "Dataset",
    "load_dataset",
]


def _loads(document: str, what: str) -> dict:
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{what} is not valid JSON: {exc}", path=what) from None
    if not isinstance(data, dict):
        raise DocumentError(f"{what} must be a JSON object", path=what)
    return data


def _require(data: dict, key: str, what: str):
    if key not in data:
        raise DocumentError(f"{what} is missing {key!r}", path=key)
    return data[key]


def parse_schema(document: str) -> DatasetSchema:
    data = _loads(document, "schema document")
    target = _require(data, "target", "schema document")
    if not isinstance(target, dict):
        raise DocumentError("'target' must be an object", path="target")
    features = []
    raw_features = _require(data, "features", "schema document")
    if not isinstance(raw_features, list):
        raise DocumentError("'features' must be an array", path="features")
    for i, raw in enumerate(raw_features):
        path = f"features[{i}]"
        if not isinstance(raw, dict):
            raise DocumentError("feature entry must be an object", path=path)
        try:
            kind = FeatureKind(_require(raw, "kind", path))
        except ValueError:
            raise DocumentError(f"unknown feature kind {raw.get('kind')!r}", path=path) from None
        try:
            features.append(FeatureSpec(str(_require(raw, "name", path)), kind,
                                        tuple(_require(raw, "domain", path))))
        except (ValueError, TypeError) as exc:
            raise DocumentError(str(exc), path=path) from None
    try:
        return DatasetSchema(
            features=tuple(features),
            target_name=str(_require(target, "name", "target")),
            target_classes=tuple(_require(target, "classes", "target")),
            id=str(data.get("id", "")),
        )
    except ValueError as exc:
        raise DocumentError(str(exc), path="schema") from None


def emit_schema(schema: DatasetSchema) -> str:
    doc = {
        "id": schema.id,
        "target": {"name": schema.target_name, "classes": list(schema.target_classes)},
        "features": [
            {"name": f.name, "kind": f.kind.value, "domain": list(f.domain)}
            for f in schema.features
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _parse_structured_predicate(raw: dict, path: str) -> Predicate:
    feature = str(_require(raw, "feature", path))
    kind = _require(raw, "kind", path)
    try:
        if kind == "interval":
            return Predicate(feature, NumericInterval(
                lower=raw.get("lower"),
                upper=raw.get("upper"),
                lower_open=bool(raw.get("lower_open", False)),
                upper_open=bool(raw.get("upper_open", False)),
            ))
        if kind == "set":
            labels = _require(raw, "labels", path)
            if not isinstance(labels, list):
                raise DocumentError("'labels' must be an array", path=path)
            return Predicate(feature, CategorySet(frozenset(str(v) for v in labels)))
    except (ValueError, TypeError) as exc:
        raise DocumentError(str(exc), path=path) from None
    raise DocumentError(f"premise entry kind must be 'interval' or 'set', got {kind!r}",
                        path=path)


def _merge_premise(predicates: list[Predicate]) -> list[Predicate]:
    merged: dict[str, Predicate] = {}
    order: list[str] = []
    for pred in predicates:
        if pred.feature not in merged:
            merged[pred.feature] = pred
            order.append(pred.feature)
            continue
        combined = merged[pred.feature].body.intersect(pred.body)
        if combined is None:
            raise DocumentError(
                f"premise predicates on {pred.feature!r} have an empty intersection",
                path=f"rule.premise.{pred.feature}")
        merged[pred.feature] = Predicate(pred.feature, combined)
    return [merged[name] for name in order]


def _parse_rule_field(raw, schema: DatasetSchema) -> Rule:
    if isinstance(raw, str):
        return parse_rule_text(raw, schema)
    if not isinstance(raw, dict):
        raise DocumentError("'rule' must be a rule-text string or an object", path="rule")
    raw_premise = raw.get("premise", [])
    if not isinstance(raw_premise, list):
        raise DocumentError("'premise' must be an array", path="rule.premise")
    predicates = [
        _parse_structured_predicate(entry, f"rule.premise[{i}]")
        for i, entry in enumerate(raw_premise)
    ]
    consequence = str(_require(raw, "consequence", "rule"))
    return Rule(tuple(_merge_premise(predicates)), consequence)


def _coerce_instance(raw: dict, schema: DatasetSchema) -> Instance:
    values: dict[str, object] = {}
    for name, value in raw.items():
        if schema.has_feature(name) and schema.feature(name).is_numerical \
                and isinstance(value, (int, float)) and not isinstance(value, bool):
            values[name] = float(value)
        else:
            values[name] = value
    return Instance(values)


def parse_bundle(document: str, schema: DatasetSchema) -> ExplanationBundle:
    """Parse and fully validate one explanation bundle.

    Raises :class:`DocumentError` on malformed JSON or shape problems and
    :class:`BundleValidationError` (with the violation report, field paths
    included) when the parsed bundle breaks an invariant.
    """
    data = _loads(document, "bundle document")
    raw_instance = _require(data, "instance", "bundle document")
    if not isinstance(raw_instance, dict):
        raise DocumentError("'instance' must be an object", path="instance")
    raw_importance = _require(data, "importance", "bundle document")
    if not isinstance(raw_importance, list):
        raise DocumentError("'importance' must be an array", path="importance")
    importance = []
    for i, raw in enumerate(raw_importance):
        path = f"importance[{i}]"
        if not isinstance(raw, dict):
            raise DocumentError("importance entry must be an object", path=path)
        weight = _require(raw, "weight", path)
        if not isinstance(weight, (int, float)) or isinstance(weight, bool):
            raise DocumentError("'weight' must be a number", path=path)
        importance.append(FeatureWeight(str(_require(raw, "feature", path)), float(weight)))
    bundle = ExplanationBundle(
        id=str(_require(data, "id", "bundle document")),
        schema_ref=str(_require(data, "schema_ref", "bundle document")),
        instance=_coerce_instance(raw_instance, schema),
        prediction=str(_require(data, "prediction", "bundle document")),
        rule=_parse_rule_field(_require(data, "rule", "bundle document"), schema),
        importance=tuple(importance),
    )
    report = validate_bundle(bundle, schema)
    if not report.is_valid:
        detail = "; ".join(f"{v.path}: {v.message}" for v in report)
        raise BundleValidationError(f"bundle {bundle.id!r} is invalid: {detail}",
                                    report.violations, path=bundle.id)
    return bundle


def _emit_predicate(pred: Predicate) -> dict:
    if isinstance(pred.body, NumericInterval):
        entry: dict = {"feature": pred.feature, "kind": "interval"}
        if pred.body.lower is not None:
            entry["lower"] = pred.body.lower
            if pred.body.lower_open:
                entry["lower_open"] = True
        if pred.body.upper is not None:
            entry["upper"] = pred.body.upper
            if pred.body.upper_open:
                entry["upper_open"] = True
        return entry
    return {"feature": pred.feature, "kind": "set", "labels": sorted(pred.body.labels)}


def emit_bundle(bundle: ExplanationBundle) -> str:
    """Canonical JSON text for a bundle; parse_bundle inverts it exactly."""
    doc = {
        "id": bundle.id,
        "schema_ref": bundle.schema_ref,
        "instance": dict(bundle.instance.values),
        "prediction": bundle.prediction,
        "rule": {
            "premise": [_emit_predicate(p) for p in bundle.rule.premise],
            "consequence": bundle.rule.consequence,
        },
        "importance": [
            {"feature": fw.feature, "weight": fw.weight} for fw in bundle.importance
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def bundle_to_dict(bundle: ExplanationBundle) -> dict:
    """The emit_bundle payload as a dict, for wire responses."""
    return json.loads(emit_bundle(bundle))


@dataclass(frozen=True)
class Dataset:
    """Raw rows of one dataset plus per-feature column access."""

    schema: DatasetSchema
    rows: tuple[dict, ...]
    targets: tuple[str, ...]

    def column(self, feature: str) -> list:
        self.schema.feature(feature)  # raises on unknown feature
        return [row[feature] for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


def load_dataset(csv_text: str, schema: DatasetSchema, source: str = "dataset") -> Dataset:
    """Parse a header-row CSV against the schema, coercing column values.

    Numerical cells must be finite numbers, categorical cells must be
    domain labels, and the target column must hold target classes; any
    violation raises :class:`DocumentError` naming the row and column.
    """
    reader = csv.DictReader(io.StringIO(csv_text))
    if reader.fieldnames is None:
        raise DocumentError(f"{source}: empty CSV", path=source)
    header = set(reader.fieldnames)
    expected = set(schema.feature_names) | {schema.target_name}
    missing = expected - header
    if missing:
        raise DocumentError(f"{source}: missing columns {sorted(missing)}", path=source)
    extra = header - expected
    if extra:
        raise DocumentError(f"{source}: unknown columns {sorted(extra)}", path=source)
    rows: list[dict] = []
    targets: list[str] = []
    for line_no, raw in enumerate(reader, start=2):
        row: dict = {}
        for spec in schema.features:
            cell = raw[spec.name]
            where = f"{source}:{line_no}:{spec.name}"
            if cell is None:
                raise DocumentError(f"{where}: missing value", path=where)
            if spec.is_numerical:
                try:
                    value = float(cell)
                except ValueError:
                    raise DocumentError(f"{where}: {cell!r} is not a number",
                                        path=where) from None
                if not math.isfinite(value):
                    raise DocumentError(f"{where}: value is not finite", path=where)
                row[spec.name] = value
            else:
                if cell not in spec.domain:
                    raise DocumentError(f"{where}: {cell!r} not in domain", path=where)
                row[spec.name] = cell
        target = raw[schema.target_name]
        if target not in schema.target_classes:
            where = f"{source}:{line_no}:{schema.target_name}"
            raise DocumentError(f"{where}: {target!r} is not a target class", path=where)
        rows.append(row)
        targets.append(target)
    if not rows:
        raise DocumentError(f"{source}: no data rows", path=source)
    return Dataset(schema=schema, rows=tuple(rows), targets=tuple(targets))
