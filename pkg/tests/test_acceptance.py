"""Acceptance suite: one test per release criterion, each printing a
PASS line (run with ``pytest tests/test_acceptance.py -v -s``).

The fuzz criterion runs for 60 seconds by default; set FIPER_FUZZ_SECONDS
to shorten it during development.
"""

from __future__ import annotations

import json
import os
import random
import string
import time
from pathlib import Path

from fastapi.testclient import TestClient

from fiper.cli import main as cli_main
from fiper.errors import RuleTextError
from fiper.model import covers, rank_by_importance
from fiper.ruletext import emit_rule_text, parse_rule_text
from fiper.service import create_app, load_store
from fiper.stats import five_number_summary
from fiper.study import (
    AnswerVector,
    DeltaCounts,
    ErrorCounts,
    TLXRatings,
    UESItems,
    aggregate_errors,
    delta_error_matrix,
    latin_square_order,
    parse_responses_document,
    parse_truths_document,
    raw_tlx,
    score_answer,
    ues_short_form,
)
from fiper.view import RowFilter, ViewOptions, build_fiper_view
from fiper.documents import emit_bundle, parse_bundle

from genutil import (
    brute_force_covers,
    random_covered_bundle,
    random_instance,
    random_rule,
    random_schema,
)
from test_view import make_summaries

SAMPLE_DIR = Path(__file__).resolve().parents[1] / "sample_data" / "german_credit"


def _report(line: str):
    print(f"\nPASS: {line}")


def test_coverage_oracle_1000_pairs_under_5s():
    rng = random.Random(101)
    schema = random_schema(rng, n_features=10)
    kinds = {f.kind.value for f in schema.features}
    assert kinds == {"numerical", "categorical"}, "schema must be mixed"
    started = time.perf_counter()
    agreements = 0
    for _ in range(1000):
        instance = random_instance(rng, schema)
        rule = random_rule(rng, schema)
        assert covers(instance, rule) == brute_force_covers(instance, rule)
        agreements += 1
    elapsed = time.perf_counter() - started
    assert agreements == 1000
    assert elapsed < 5.0, f"coverage check took {elapsed:.2f}s"
    _report(f"coverage oracle: 1000/1000 agreements in {elapsed:.2f}s (< 5s)")


def test_quartile_oracle_500_samples_within_1e9():
    def oracle(values, p):
        ordered = sorted(values)
        pos = p * (len(ordered) - 1)
        lo = int(pos)
        hi = min(lo + 1, len(ordered) - 1)
        frac = pos - lo
        return ordered[lo] * (1 - frac) + ordered[hi] * frac

    rng = random.Random(202)
    worst = 0.0
    for trial in range(500):
        n = rng.randint(1, 500)
        values = [rng.uniform(-1e5, 1e5) for _ in range(n)]
        got = five_number_summary(values)
        assert got.min == min(values) and got.max == max(values)
        for attr, p in (("q1", 0.25), ("median", 0.5), ("q3", 0.75)):
            diff = abs(getattr(got, attr) - oracle(values, p))
            worst = max(worst, diff)
            assert diff < 1e-9, (trial, attr, diff)
    _report(f"quartile oracle: 500 samples, worst |diff| = {worst:.2e} (< 1e-9)")


def test_marker_in_highlight_over_200_random_valid_bundles():
    checked = 0
    for i in range(200):
        rng = random.Random(9000 + i)
        schema = random_schema(rng, n_features=8)
        bundle = random_covered_bundle(rng, schema)
        summaries = make_summaries(rng, schema)
        view = build_fiper_view(bundle, summaries,
                                ViewOptions(filter=RowFilter.RULE_ONLY))
        assert {r.feature for r in view.rows} == set(bundle.rule.premise_features)
        for row in view.rows:
            if row.highlight.flags is None:
                assert row.highlight.start <= row.marker.normalized \
                    <= row.highlight.end, row.feature
            else:
                assert row.highlight.flags[row.marker.segment_index], row.feature
            checked += 1
    _report(f"marker-in-highlight: {checked} premise predicates over 200 bundles")


def test_showcase_structural_reproduction(mixed_rule_bundle, summaries, schema):
    rule_view = build_fiper_view(mixed_rule_bundle, summaries,
                                 ViewOptions(filter=RowFilter.RULE_ONLY))
    assert len(rule_view.rows) == 3
    assert {r.feature for r in rule_view.rows} == \
        {"present_employed_since", "purpose", "age"}
    all_view = build_fiper_view(mixed_rule_bundle, summaries, ViewOptions())
    assert len(all_view.rows) == len(schema.features)
    mags = [abs(r.weight) for r in all_view.rows]
    assert all(a >= b for a, b in zip(mags, mags[1:]))
    _report("two-panel structural reproduction: 3 rule rows; "
            "full view sorted by |weight|")


def test_parser_round_trips_and_fuzz():
    # round trips: 1000 rules across 1000 schemas
    rule_rng = random.Random(303)
    for i in range(1000):
        schema = random_schema(random.Random(i), n_features=8)
        rule = random_rule(rule_rng, schema)
        assert parse_rule_text(emit_rule_text(rule, schema), schema) == rule
    # 200 bundle round trips
    for i in range(200):
        rng = random.Random(7000 + i)
        schema = random_schema(rng, n_features=8)
        bundle = random_covered_bundle(rng, schema, bundle_id=f"rt{i}")
        assert parse_bundle(emit_bundle(bundle), schema) == bundle

    # fuzz: arbitrary input must yield a Rule or a structured error, never crash
    seconds = float(os.environ.get("FIPER_FUZZ_SECONDS", "60"))
    fuzz_rng = random.Random(404)
    schema = random_schema(random.Random(1), n_features=8)
    seed_texts = [
        emit_rule_text(random_rule(fuzz_rng, schema), schema) for _ in range(50)
    ]
    alphabet = string.printable + "é≤{}\"\\"
    deadline = time.monotonic() + seconds
    attempts = 0
    while time.monotonic() < deadline:
        mode = fuzz_rng.randrange(3)
        if mode == 0:
            text = "".join(fuzz_rng.choice(alphabet)
                           for _ in range(fuzz_rng.randrange(0, 120)))
        elif mode == 1:
            text = list(fuzz_rng.choice(seed_texts))
            for _ in range(fuzz_rng.randrange(1, 6)):
                if not text:
                    break
                op = fuzz_rng.randrange(3)
                pos = fuzz_rng.randrange(len(text))
                if op == 0:
                    text[pos] = fuzz_rng.choice(alphabet)
                elif op == 1:
                    del text[pos]
                else:
                    text.insert(pos, fuzz_rng.choice(alphabet))
            text = "".join(text)
        else:
            text = bytes(fuzz_rng.randrange(256)
                         for _ in range(fuzz_rng.randrange(0, 80))) \
                .decode("utf-8", errors="replace")
        try:
            parse_rule_text(text, schema)
        except RuleTextError:
            pass
        attempts += 1
    assert attempts > 1000
    _report(f"parser round trips: 1000 rules + 200 bundles; "
            f"fuzz {seconds:.0f}s / {attempts} inputs, no crash")


def test_study_design_arithmetic():
    truths = parse_truths_document((SAMPLE_DIR / "study" / "truth.json").read_text())
    perfect = parse_responses_document(
        (SAMPLE_DIR / "study" / "responses_perfect.json").read_text())
    matrix = aggregate_errors(perfect, truths)
    assert len(matrix) == 15 * 3 * 3 * 3 == 405
    assert matrix.missing == ()
    assert all(c == ErrorCounts(0, 0) for c in matrix.cells.values())
    orders = latin_square_order(15, 3)
    for pos in range(3):
        for condition in range(3):
            assert sum(1 for o in orders if o[pos] == condition) == 5
    _report("study design arithmetic: 405 scored answers, perfect = all zero, "
            "latin square 5 per condition per position")


def test_scoring_oracles_10k_random_inputs_each():
    rng = random.Random(505)

    for _ in range(10_000):
        n = rng.randint(1, 16)
        a = tuple(rng.randint(0, 1) for _ in range(n))
        t = tuple(rng.randint(0, 1) for _ in range(n))
        expect_e1 = sum(1 for i in range(n) if a[i] and not t[i])
        expect_e2 = sum(1 for i in range(n) if t[i] and not a[i])
        assert score_answer(AnswerVector(a), AnswerVector(t)) == \
            ErrorCounts(expect_e1, expect_e2)

    # delta matrices: random cell grids vs direct subtraction
    checked_deltas = 0
    grid_rng = random.Random(606)
    while checked_deltas < 10_000:
        participants = [f"p{i}" for i in range(grid_rng.randint(2, 6))]
        conditions = ["base", "x", "y"]
        truths = {(1, q): AnswerVector(tuple(grid_rng.randint(0, 1)
                                             for _ in range(8)))
                  for q in (1, 2, 3)}
        from fiper.study import StudyResponse
        responses = [
            StudyResponse(p, c, 1, q,
                          AnswerVector(tuple(grid_rng.randint(0, 1)
                                             for _ in range(8))),
                          grid_rng.uniform(1, 99))
            for p in participants for c in conditions for q in (1, 2, 3)
        ]
        matrix = aggregate_errors(responses, truths)
        deltas = delta_error_matrix(matrix, "base")
        for key, delta in deltas.items():
            base = matrix.cells[("base",) + key[1:]]
            cell = matrix.cells[key]
            assert delta == DeltaCounts(cell.e1 - base.e1, cell.e2 - base.e2)
            checked_deltas += 1

    for _ in range(10_000):
        vals = tuple(rng.randrange(0, 101, 5) for _ in range(6))
        assert raw_tlx(TLXRatings(*vals)) == sum(vals) / 6
    assert raw_tlx(TLXRatings(20, 40, 60, 80, 100, 0)) == 50.0

    for _ in range(10_000):
        items = tuple(rng.randint(1, 5) for _ in range(12))
        scores = ues_short_form(UESItems(items))
        assert scores.overall == sum(items) / 12
        assert scores.FA == sum(items[0:3]) / 3
        assert scores.RW == sum(items[9:12]) / 3
    _report("scoring oracles: 10k random inputs per scorer, "
            "raw TLX fixed point = 50 exactly")


def test_render_determinism_cli_equals_service(tmp_path):
    store = load_store(SAMPLE_DIR)
    client = TestClient(create_app(store))
    out = tmp_path / "cli.svg"
    code = cli_main([
        "render", str(SAMPLE_DIR / "bundles" / "gc-001.bundle.json"),
        "--schema", str(SAMPLE_DIR / "german_credit.schema.json"),
        "--dataset", str(SAMPLE_DIR / "german_credit.csv"),
        "--format", "svg", "-o", str(out),
    ])
    assert code == 0
    served = client.get("/api/explanations/gc-001/svg")
    assert out.read_bytes() == served.content
    again = client.get("/api/explanations/gc-001/svg")
    assert served.content == again.content
    view_a = client.get("/api/explanations/gc-001/view?filter=rule")
    view_b = client.get("/api/explanations/gc-001/view?filter=rule")
    assert view_a.content == view_b.content
    _report("determinism: CLI svg == service svg bytes; repeated GETs identical")
