"""Distribution summaries and the chart geometry derived from them.

Numerical features get a five-number summary (min, Q1, median, Q3, max)
with quartiles by linear interpolation between closest ranks (the
convention where the p-quantile interpolates order statistics at rank
1 + p*(n-1)). Categorical features get per-label counts in schema domain
order, zero-count labels included.

Chart geometry shares one normalized axis per feature: the dataset
[min, max] maps onto [0, 1], and both the observed-value marker and the
predicate highlight are expressed in that coordinate system so they line
up inside one row. A degenerate axis (max == min) pins everything at 0.5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .errors import StatsError
from .model import CategorySet, FeatureSpec, NumericInterval, Predicate

__all__ = [
    "FiveNumber",
    "CategoricalSummary",
    "FeatureSummary",
    "QuartileBucket",
    "MarkerPosition",
    "HighlightSpan",
    "five_number_summary",
    "categorical_distribution",
    "locate_observation",
    "predicate_highlight",
    "summarize_dataset",
]


@dataclass(frozen=True)
class FiveNumber:
    min: float
    q1: float
    median: float
    q3: float
    max: float

    def __post_init__(self):
        vals = (self.min, self.q1, self.median, self.q3, self.max)
        for a, b in zip(vals, vals[1:]):
            if a > b:
                raise StatsError(f"five-number summary out of order: {vals}")


@dataclass(frozen=True)
class CategoricalSummary:
    """Ordered (label, count) pairs; order matches the schema domain."""

    entries: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((str(l), int(c)) for l, c in self.entries))
        labels = [l for l, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise StatsError("duplicate labels in categorical summary")
        if any(c < 0 for _, c in self.entries):
            raise StatsError("negative count in categorical summary")
        if sum(c for _, c in self.entries) <= 0:
            raise StatsError("categorical summary counts must sum to > 0")

    @property
    def total(self) -> int:
        return sum(c for _, c in self.entries)

    def index_of(self, label: str) -> int:
        for i, (l, _) in enumerate(self.entries):
            if l == label:
                return i
        raise StatsError(f"label {label!r} not in summary")


SummaryBody = Union[FiveNumber, CategoricalSummary]


@dataclass(frozen=True)
class FeatureSummary:
    feature: str
    body: SummaryBody

    @property
    def is_numerical(self) -> bool:
        return isinstance(self.body, FiveNumber)


class QuartileBucket(str, Enum):
    BELOW_Q1 = "below_q1"
    Q1_TO_MEDIAN = "q1_to_median"
    MEDIAN_TO_Q3 = "median_to_q3"
    ABOVE_Q3 = "above_q3"


@dataclass(frozen=True)
class MarkerPosition:
    """Where the observed value sits along the feature's chart axis."""

    normalized: float
    quartile_bucket: Optional[QuartileBucket] = None
    segment_index: Optional[int] = None
    clamped: bool = False

    def __post_init__(self):
        if not 0.0 <= self.normalized <= 1.0:
            raise StatsError(f"normalized position {self.normalized} outside [0, 1]")


@dataclass(frozen=True)
class HighlightSpan:
    """Extent of a predicate on the chart axis.

    Numerical predicates fill ``start``/``end`` (a closed normalized span);
    categorical ones fill ``flags``, one boolean per summary entry.
    ``degenerate`` marks a numerical predicate wholly outside the observed
    range, collapsed to a zero-width span at the nearer axis edge.
    """

    start: Optional[float] = None
    end: Optional[float] = None
    flags: Optional[tuple[bool, ...]] = None
    degenerate: bool = False

    def __post_init__(self):
        if self.flags is None:
            if self.start is None or self.end is None:
                raise StatsError("numerical highlight needs start and end")
            if not 0.0 <= self.start <= self.end <= 1.0:
                raise StatsError(f"highlight span [{self.start}, {self.end}] invalid")
        elif self.start is not None or self.end is not None:
            raise StatsError("highlight is either a span or flags, not both")

    def contains(self, normalized: float) -> bool:
        return self.start <= normalized <= self.end


def five_number_summary(values: Sequence[float]) -> FiveNumber:
    if len(values) == 0:
        raise StatsError("cannot summarize an empty sample")
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise StatsError("sample contains non-finite values")
    q1, median, q3 = np.quantile(arr, [0.25, 0.5, 0.75], method="linear")
    return FiveNumber(float(arr.min()), float(q1), float(median), float(q3),
                      float(arr.max()))


def categorical_distribution(values: Sequence[str], spec: FeatureSpec) -> CategoricalSummary:
    if len(values) == 0:
        raise StatsError(f"cannot summarize an empty sample for {spec.name!r}")
    counts = dict.fromkeys(spec.domain, 0)
    for v in values:
        if v not in counts:
            raise StatsError(f"value {v!r} not in the domain of {spec.name!r}")
        counts[v] += 1
    return CategoricalSummary(tuple(counts.items()))


def _normalize(value: float, lo: float, hi: float) -> float:
    if hi == lo:
        return 0.5
    return (value - lo) / (hi - lo)


def locate_observation(summary: FeatureSummary, value) -> MarkerPosition:
    """Marker for the observed value: axis position plus quartile bucket
    (numerical) or stacked-segment center and index (categorical).

    Numerical values outside [min, max] clamp to the axis edge with the
    ``clamped`` flag set. Bucket ties resolve upward: value == Q1 lands in
    q1_to_median. Categorical markers sit at the center of the observed
    label's segment: (count before + count/2) / total.
    """
    body = summary.body
    if isinstance(body, FiveNumber):
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise StatsError(f"numerical feature {summary.feature!r} got {value!r}")
        v = float(value)
        if not math.isfinite(v):
            raise StatsError(f"observed value for {summary.feature!r} is not finite")
        if v < body.q1:
            bucket = QuartileBucket.BELOW_Q1
        elif v < body.median:
            bucket = QuartileBucket.Q1_TO_MEDIAN
        elif v < body.q3:
            bucket = QuartileBucket.MEDIAN_TO_Q3
        else:
            bucket = QuartileBucket.ABOVE_Q3
        clamped = v < body.min or v > body.max
        norm = min(1.0, max(0.0, _normalize(v, body.min, body.max)))
        return MarkerPosition(norm, quartile_bucket=bucket, clamped=clamped)
    idx = body.index_of(str(value))
    before = sum(c for _, c in body.entries[:idx])
    count = body.entries[idx][1]
    norm = (before + count / 2) / body.total
    return MarkerPosition(norm, segment_index=idx)


def predicate_highlight(predicate: Predicate, summary: FeatureSummary) -> HighlightSpan:
    """Extent of the predicate on the summary's axis.

    Numerical: the predicate interval intersected with the observed
    [min, max], normalized like the marker; an unbounded end runs to the
    axis edge, and an empty intersection collapses to a zero-width span at
    the nearer edge, flagged degenerate. Categorical: one flag per entry,
    true exactly for the predicate's labels.
    """
    if predicate.feature != summary.feature:
        raise StatsError(
            f"predicate on {predicate.feature!r} against summary of {summary.feature!r}")
    body = summary.body
    if isinstance(body, FiveNumber):
        if not isinstance(predicate.body, NumericInterval):
            raise StatsError(f"category predicate on numerical feature {summary.feature!r}")
        interval = predicate.body
        lo = body.min if interval.lower is None else interval.lower
        hi = body.max if interval.upper is None else interval.upper
        clipped_lo = max(lo, body.min)
        clipped_hi = min(hi, body.max)
        if clipped_lo > clipped_hi:
            edge = 1.0 if lo > body.max else 0.0
            if body.max == body.min:
                edge = 0.5
            return HighlightSpan(start=edge, end=edge, degenerate=True)
        if body.max == body.min:
            return HighlightSpan(start=0.5, end=0.5)
        return HighlightSpan(start=_normalize(clipped_lo, body.min, body.max),
                             end=_normalize(clipped_hi, body.min, body.max))
    if not isinstance(predicate.body, CategorySet):
        raise StatsError(f"interval predicate on categorical feature {summary.feature!r}")
    labels = predicate.body.labels
    return HighlightSpan(flags=tuple(label in labels for label, _ in body.entries))


def summarize_dataset(dataset) -> dict[str, FeatureSummary]:
    """One FeatureSummary per schema feature, in schema order."""
    out: dict[str, FeatureSummary] = {}
    for spec in dataset.schema.features:
        column = dataset.column(spec.name)
        if spec.is_numerical:
            body: SummaryBody = five_number_summary(column)
        else:
            body = categorical_distribution(column, spec)
        out[spec.name] = FeatureSummary(spec.name, body)
    return out
