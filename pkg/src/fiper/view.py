"""Assembles the render-ready two-panel view from a bundle and summaries.

Each row pairs one feature's importance bar with its distribution chart,
highlight, and observed-value marker. Rows are ordered by |weight|
(stable, descending) or by schema order, and can be restricted to the
features named in the rule premise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .errors import ViewError
from .model import ExplanationBundle, FeatureWeight, rank_by_importance
from .stats import (
    CategoricalSummary,
    FeatureSummary,
    HighlightSpan,
    MarkerPosition,
    locate_observation,
    predicate_highlight,
)

__all__ = [
    "RowFilter",
    "RowSort",
    "Palette",
    "ViewOptions",
    "WeightSign",
    "FiperRow",
    "FiperView",
    "build_fiper_view",
    "serialize_view",
    "summary_to_dict",
    "DEFAULT_PALETTE",
]


class RowFilter(str, Enum):
    ALL_FEATURES = "all_features"
    RULE_ONLY = "rule_only"


class RowSort(str, Enum):
    ABS_IMPORTANCE = "abs_importance"
    SCHEMA_ORDER = "schema_order"


@dataclass(frozen=True)
class Palette:
    """Color-blind-safe defaults: blue for positive weights, reddish-purple
    for negative, yellow predicate highlights, black diamond markers."""

    positive_color: str = "#0072B2"
    negative_color: str = "#CC79A7"
    highlight_color: str = "#F0E442"
    marker_color: str = "#000000"

    def __post_init__(self):
        if self.positive_color == self.negative_color:
            raise ViewError("positive and negative colors must differ")


DEFAULT_PALETTE = Palette()


@dataclass(frozen=True)
class ViewOptions:
    filter: RowFilter = RowFilter.ALL_FEATURES
    sort: RowSort = RowSort.ABS_IMPORTANCE
    palette: Palette = field(default_factory=Palette)


class WeightSign(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"


def _sign(weight: float) -> WeightSign:
    if weight > 0:
        return WeightSign.POSITIVE
    if weight < 0:
        return WeightSign.NEGATIVE
    return WeightSign.ZERO


@dataclass(frozen=True)
class FiperRow:
    """One aligned row. ``observed`` is the instance's raw value for the
    feature, carried so tooltips can serve it verbatim."""

    feature: str
    weight: float
    weight_sign: WeightSign
    summary: FeatureSummary
    highlight: HighlightSpan | None
    marker: MarkerPosition
    in_rule: bool
    observed: object = None

    def __post_init__(self):
        if self.in_rule != (self.highlight is not None):
            raise ViewError(f"row {self.feature!r}: highlight present iff in rule")
        if self.weight_sign is not _sign(self.weight):
            raise ViewError(f"row {self.feature!r}: weight sign mismatch")


@dataclass(frozen=True)
class FiperView:
    rows: tuple[FiperRow, ...]
    options: ViewOptions
    prediction: str
    bundle_id: str


def build_fiper_view(
    bundle: ExplanationBundle,
    summaries: Mapping[str, FeatureSummary],
    options: ViewOptions = ViewOptions(),
) -> FiperView:
    """Build the aligned row list for one explanation.

    ``summaries`` must cover every schema feature, in schema order (its
    iteration order defines the schema-order sort). Rule features absent
    from the FI list rank with weight 0; every row carries the instance
    marker, and rows inside the rule carry their predicate's highlight.
    """
    premise = {p.feature: p for p in bundle.rule.premise}
    for feature in premise:
        if feature not in summaries:
            raise ViewError(f"no summary for rule feature {feature!r}")

    weights: list[FeatureWeight] = list(bundle.importance)
    listed = {fw.feature for fw in weights}
    weights.extend(
        FeatureWeight(name, 0.0) for name in summaries if name not in listed
    )

    if options.sort is RowSort.ABS_IMPORTANCE:
        ordered = rank_by_importance(weights)
    else:
        schema_pos = {name: i for i, name in enumerate(summaries)}
        ordered = sorted(weights, key=lambda fw: schema_pos.get(fw.feature, len(schema_pos)))

    if options.filter is RowFilter.RULE_ONLY:
        ordered = [fw for fw in ordered if fw.feature in premise]

    rows = []
    for fw in ordered:
        summary = summaries.get(fw.feature)
        if summary is None:
            raise ViewError(f"no summary for feature {fw.feature!r}")
        pred = premise.get(fw.feature)
        observed = bundle.instance[fw.feature]
        rows.append(FiperRow(
            feature=fw.feature,
            weight=fw.weight,
            weight_sign=_sign(fw.weight),
            summary=summary,
            highlight=predicate_highlight(pred, summary) if pred else None,
            marker=locate_observation(summary, observed),
            in_rule=pred is not None,
            observed=observed,
        ))
    return FiperView(tuple(rows), options, bundle.prediction, bundle.id)


def summary_to_dict(summary: FeatureSummary) -> dict:
    if summary.is_numerical:
        body = summary.body
        return {"kind": "numerical", "min": body.min, "q1": body.q1,
                "median": body.median, "q3": body.q3, "max": body.max}
    assert isinstance(summary.body, CategoricalSummary)
    return {"kind": "categorical",
            "entries": [{"label": l, "count": c} for l, c in summary.body.entries]}


def _marker_to_dict(marker: MarkerPosition) -> dict:
    return {
        "normalized": marker.normalized,
        "quartile_bucket": marker.quartile_bucket.value if marker.quartile_bucket else None,
        "segment_index": marker.segment_index,
        "clamped": marker.clamped,
    }


def _highlight_to_dict(span: HighlightSpan | None) -> dict | None:
    if span is None:
        return None
    if span.flags is None:
        return {"start": span.start, "end": span.end, "degenerate": span.degenerate}
    return {"flags": list(span.flags), "degenerate": span.degenerate}


def serialize_view(view: FiperView) -> dict:
    """Wire document mirroring the view field-for-field: plain decimals for
    numbers, hex strings for colors."""
    return {
        "bundle_id": view.bundle_id,
        "prediction": view.prediction,
        "options": {
            "filter": view.options.filter.value,
            "sort": view.options.sort.value,
            "palette": {
                "positive_color": view.options.palette.positive_color,
                "negative_color": view.options.palette.negative_color,
                "highlight_color": view.options.palette.highlight_color,
                "marker_color": view.options.palette.marker_color,
            },
        },
        "rows": [
            {
                "feature": row.feature,
                "weight": row.weight,
                "weight_sign": row.weight_sign.value,
                "in_rule": row.in_rule,
                "summary": summary_to_dict(row.summary),
                "highlight": _highlight_to_dict(row.highlight),
                "marker": _marker_to_dict(row.marker),
                "observed": row.observed,
            }
            for row in view.rows
        ],
    }
