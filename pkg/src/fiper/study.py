"""Scoring machinery for the feature-selection user study.

Participants answer feature-selection questions as binary vectors of
length F+1 (one slot per dataset feature plus a final "I don't know"
slot). Comparing an answer against the ground-truth vector yields two
error kinds: selecting a feature that is absent (E1) and missing one that
is present (E2). Responses are collected per (participant, condition,
instance, question); conditions are the explanation modalities, ordered
per participant by a cyclic Latin square. Workload is the raw NASA-TLX
(unweighted mean of the six 0..100 ratings in steps of 5) and engagement
the 12-item short-form UES (three items per subscale FA, PU, AE, RW,
each 1..5).
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DocumentError, StudyError

__all__ = [
    "AnswerVector",
    "StudyResponse",
    "ErrorCounts",
    "DeltaCounts",
    "ErrorMatrix",
    "TLXRatings",
    "UESItems",
    "UESScores",
    "score_answer",
    "aggregate_errors",
    "delta_error_matrix",
    "latin_square_order",
    "raw_tlx",
    "ues_short_form",
    "completion_time_summary",
    "score_study",
    "parse_truths_document",
    "parse_responses_document",
]


@dataclass(frozen=True)
class AnswerVector:
    """Binary selections over F features plus the trailing "I don't know"
    slot, which is scored like any other position."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise StudyError("answer vector entries must be 0 or 1")
        if not bits:
            raise StudyError("answer vector must be nonempty")
        object.__setattr__(self, "bits", bits)

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class StudyResponse:
    participant_id: str
    condition: str
    instance_index: int
    question_index: int
    answer: AnswerVector
    completion_time: float

    def __post_init__(self):
        if self.completion_time < 0:
            raise StudyError("completion time must be >= 0")
        if self.instance_index < 1 or self.question_index < 1:
            raise StudyError("instance and question indices are 1-based")

    @property
    def key(self) -> tuple[str, str, int, int]:
        return (self.condition, self.instance_index, self.question_index,
                self.participant_id)


@dataclass(frozen=True)
class ErrorCounts:
    """e1: selected-but-absent features; e2: present-but-unselected."""

    e1: int
    e2: int

    @property
    def total(self) -> int:
        return self.e1 + self.e2


@dataclass(frozen=True)
class DeltaCounts:
    """Signed per-component error difference against a baseline condition;
    negative means fewer errors than the baseline."""

    e1: int
    e2: int

    @property
    def total(self) -> int:
        return self.e1 + self.e2


def score_answer(answer: AnswerVector, truth: AnswerVector) -> ErrorCounts:
    """Elementwise comparison; the "I don't know" slot is an ordinary position."""
    if len(answer) != len(truth):
        raise StudyError(
            f"answer length {len(answer)} != truth length {len(truth)}")
    e1 = sum(1 for a, t in zip(answer.bits, truth.bits) if a == 1 and t == 0)
    e2 = sum(1 for a, t in zip(answer.bits, truth.bits) if t == 1 and a == 0)
    return ErrorCounts(e1, e2)


@dataclass(frozen=True)
class ErrorMatrix:
    """Scored cells keyed by (condition, instance, question, participant).

    ``missing`` lists keys of the full crossed design (every observed
    participant x condition x instance x question) that have no response;
    they are flagged, never zero-filled.
    """

    cells: Mapping[tuple, ErrorCounts]
    missing: tuple[tuple, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "cells", dict(self.cells))
        object.__setattr__(self, "missing", tuple(self.missing))

    @property
    def conditions(self) -> tuple[str, ...]:
        return tuple(sorted({key[0] for key in self.cells}))

    def __len__(self) -> int:
        return len(self.cells)

    def total_errors(self) -> int:
        return sum(c.total for c in self.cells.values())


def aggregate_errors(
    responses: Sequence[StudyResponse],
    truths: Mapping[tuple[int, int], AnswerVector],
) -> ErrorMatrix:
    """Score every response against its (instance, question) truth vector.

    Raises on a response with no truth vector or on duplicate cells. The
    expected design is the cross product of the observed participants,
    conditions, instances and questions; holes in it are reported in
    ``missing``.
    """
    cells: dict[tuple, ErrorCounts] = {}
    for resp in responses:
        tkey = (resp.instance_index, resp.question_index)
        if tkey not in truths:
            raise StudyError(
                f"no truth vector for instance {resp.instance_index}, "
                f"question {resp.question_index}")
        if resp.key in cells:
            raise StudyError(f"duplicate response for {resp.key}")
        cells[resp.key] = score_answer(resp.answer, truths[tkey])
    participants = sorted({r.participant_id for r in responses})
    conditions = sorted({r.condition for r in responses})
    instances = sorted({r.instance_index for r in responses})
    questions = sorted({r.question_index for r in responses})
    missing = [
        (c, i, q, p)
        for c in conditions for i in instances for q in questions for p in participants
        if (c, i, q, p) not in cells
    ]
    return ErrorMatrix(cells, tuple(missing))


def delta_error_matrix(
    matrix: ErrorMatrix, baseline_condition: str,
) -> dict[tuple, DeltaCounts]:
    """Per-cell signed differences of each non-baseline condition against
    the baseline, matched on (instance, question, participant)."""
    if baseline_condition not in matrix.conditions:
        raise StudyError(f"baseline condition {baseline_condition!r} not in matrix")
    baseline = {
        key[1:]: counts for key, counts in matrix.cells.items()
        if key[0] == baseline_condition
    }
    deltas: dict[tuple, DeltaCounts] = {}
    for key, counts in matrix.cells.items():
        if key[0] == baseline_condition:
            continue
        base = baseline.get(key[1:])
        if base is None:
            continue
        deltas[key] = DeltaCounts(counts.e1 - base.e1, counts.e2 - base.e2)
    return deltas


def latin_square_order(participants: int, conditions: int) -> list[list[int]]:
    """Condition-index orderings cycling through the rows of the k x k
    cyclic Latin square; with k | n every condition occupies every
    position exactly n/k times."""
    if participants < 1 or conditions < 1:
        raise StudyError("participants and conditions must be >= 1")
    square = [[(row + pos) % conditions for pos in range(conditions)]
              for row in range(conditions)]
    return [list(square[p % conditions]) for p in range(participants)]


_TLX_DIMENSIONS = ("mental", "physical", "temporal", "performance", "effort",
                   "frustration")


@dataclass(frozen=True)
class TLXRatings:
    mental: int
    physical: int
    temporal: int
    performance: int
    effort: int
    frustration: int

    def __post_init__(self):
        for name in _TLX_DIMENSIONS:
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0 or v > 100 or v % 5 != 0:
                raise StudyError(
                    f"TLX {name} rating {v!r} must be 0..100 in steps of 5")

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(getattr(self, name) for name in _TLX_DIMENSIONS)


def raw_tlx(ratings: TLXRatings) -> float:
    """Unweighted mean of the six workload dimensions."""
    values = ratings.as_tuple()
    return sum(values) / len(values)


_UES_SUBSCALES = ("FA", "PU", "AE", "RW")


@dataclass(frozen=True)
class UESItems:
    """Twelve 1..5 Likert items, three per subscale in FA, PU, AE, RW order."""

    items: tuple[int, ...]

    def __post_init__(self):
        items = tuple(int(v) for v in self.items)
        if len(items) != 12:
            raise StudyError(f"UES short form has 12 items, got {len(items)}")
        if any(v < 1 or v > 5 for v in items):
            raise StudyError("UES items must be in 1..5")
        object.__setattr__(self, "items", items)


@dataclass(frozen=True)
class UESScores:
    FA: float
    PU: float
    AE: float
    RW: float
    overall: float


def ues_short_form(items: UESItems, reverse_items: Iterable[int] = ()) -> UESScores:
    """Subscale means and the overall mean of all 12 items.

    ``reverse_items`` holds 0-based indices of reverse-keyed items
    (scored as 6 - value); published keyings vary by instrument version,
    so none are assumed by default.
    """
    reverse = set(reverse_items)
    if any(i < 0 or i >= 12 for i in reverse):
        raise StudyError("reverse item indices must be in 0..11")
    keyed = [6 - v if i in reverse else v for i, v in enumerate(items.items)]
    subscales = {
        name: sum(keyed[3 * k:3 * k + 3]) / 3
        for k, name in enumerate(_UES_SUBSCALES)
    }
    return UESScores(overall=sum(keyed) / 12, **subscales)


def completion_time_summary(
    times: Mapping[tuple, Mapping[str, float]],
) -> dict[tuple, dict]:
    """Median completion time per group plus the per-participant bars.

    ``times`` maps a group key, conventionally (condition, instance), to
    {participant: seconds}. Medians use the same linear-interpolation
    convention as the distribution summaries (even-sized groups average
    the middle two).
    """
    out: dict[tuple, dict] = {}
    for key, group in times.items():
        if not group:
            raise StudyError(f"empty completion-time group {key!r}")
        out[key] = {
            "median": float(statistics.median(group.values())),
            "times": dict(sorted(group.items())),
        }
    return out


def _matrix_rows(matrix: ErrorMatrix) -> list[dict]:
    rows = []
    for key in sorted(matrix.cells):
        condition, instance, question, participant = key
        counts = matrix.cells[key]
        rows.append({
            "condition": condition, "instance": instance, "question": question,
            "participant": participant, "e1": counts.e1, "e2": counts.e2,
            "total": counts.total,
        })
    return rows


def score_study(
    truths: Mapping[tuple[int, int], AnswerVector],
    responses: Sequence[StudyResponse],
    baseline_condition: Optional[str] = None,
) -> dict:
    """Full error/time report: the absolute error matrix, the delta matrix
    against the baseline condition (when given), per-condition totals and
    median completion times per (condition, instance)."""
    matrix = aggregate_errors(responses, truths)
    times: dict[tuple, dict[str, float]] = {}
    for resp in responses:
        group = times.setdefault((resp.condition, resp.instance_index), {})
        # One bar per participant: sum the per-question times within the cell.
        group[resp.participant_id] = group.get(resp.participant_id, 0.0) \
            + resp.completion_time
    medians = completion_time_summary(times)
    totals: dict[str, dict[str, int]] = {}
    for (condition, _, _, _), counts in matrix.cells.items():
        agg = totals.setdefault(condition, {"e1": 0, "e2": 0, "total": 0})
        agg["e1"] += counts.e1
        agg["e2"] += counts.e2
        agg["total"] += counts.total
    report = {
        "design": {
            "participants": sorted({r.participant_id for r in responses}),
            "conditions": sorted({r.condition for r in responses}),
            "instances": sorted({r.instance_index for r in responses}),
            "questions": sorted({r.question_index for r in responses}),
            "scored_cells": len(matrix),
        },
        "cells": _matrix_rows(matrix),
        "missing": [list(key) for key in matrix.missing],
        "totals": {c: totals[c] for c in sorted(totals)},
        "median_times": [
            {"condition": key[0], "instance": key[1],
             "median": medians[key]["median"], "times": medians[key]["times"]}
            for key in sorted(medians)
        ],
    }
    if baseline_condition is not None:
        deltas = delta_error_matrix(aggregate_errors(responses, truths),
                                    baseline_condition)
        report["baseline"] = baseline_condition
        report["deltas"] = [
            {"condition": key[0], "instance": key[1], "question": key[2],
             "participant": key[3], "d_e1": d.e1, "d_e2": d.e2,
             "d_total": d.total}
            for key, d in sorted(deltas.items())
        ]
    return report


def parse_truths_document(document: str) -> dict[tuple[int, int], AnswerVector]:
    """Truth vectors keyed by (instance, question)::

        {"feature_count": 10,
         "truths": [{"instance": 1, "question": 1, "bits": [0, 1, ...]}]}

    Vector length must be feature_count + 1 (the trailing slot is the
    "I don't know" option).
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"truths document is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "truths" not in data:
        raise DocumentError("truths document needs a 'truths' array")
    expected_len = None
    if "feature_count" in data:
        expected_len = int(data["feature_count"]) + 1
    out: dict[tuple[int, int], AnswerVector] = {}
    for i, raw in enumerate(data["truths"]):
        path = f"truths[{i}]"
        try:
            key = (int(raw["instance"]), int(raw["question"]))
            vector = AnswerVector(tuple(raw["bits"]))
        except (KeyError, TypeError, ValueError, StudyError) as exc:
            raise DocumentError(f"{path}: {exc}", path=path) from None
        if expected_len is not None and len(vector) != expected_len:
            raise DocumentError(
                f"{path}: vector length {len(vector)} != feature_count + 1 "
                f"({expected_len})", path=path)
        if key in out:
            raise DocumentError(f"{path}: duplicate truth for {key}", path=path)
        out[key] = vector
    if not out:
        raise DocumentError("truths document has no entries")
    return out


def parse_responses_document(document: str) -> list[StudyResponse]:
    """Responses::

        {"responses": [{"participant": "p01", "condition": "fiper",
                        "instance": 1, "question": 2,
                        "answer": [0, 1, ...], "completion_time": 40.2}]}
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"responses document is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "responses" not in data:
        raise DocumentError("responses document needs a 'responses' array")
    out: list[StudyResponse] = []
    for i, raw in enumerate(data["responses"]):
        path = f"responses[{i}]"
        try:
            out.append(StudyResponse(
                participant_id=str(raw["participant"]),
                condition=str(raw["condition"]),
                instance_index=int(raw["instance"]),
                question_index=int(raw["question"]),
                answer=AnswerVector(tuple(raw["answer"])),
                completion_time=float(raw["completion_time"]),
            ))
        except (KeyError, TypeError, ValueError, StudyError) as exc:
            raise DocumentError(f"{path}: {exc}", path=path) from None
    if not out:
        raise DocumentError("responses document has no entries")
    return out
