from __future__ import annotations

import json
import random
from collections import Counter
from pathlib import Path

import pytest

from fiper.errors import DocumentError, StudyError
from fiper.study import (
    AnswerVector,
    DeltaCounts,
    ErrorCounts,
    StudyResponse,
    TLXRatings,
    UESItems,
    aggregate_errors,
    completion_time_summary,
    delta_error_matrix,
    latin_square_order,
    parse_responses_document,
    parse_truths_document,
    raw_tlx,
    score_answer,
    score_study,
    ues_short_form,
)

STUDY_DIR = Path(__file__).resolve().parents[1] / "sample_data" / "german_credit" / "study"


def load_fixture_study():
    truths = parse_truths_document((STUDY_DIR / "truth.json").read_text())
    perfect = parse_responses_document(
        (STUDY_DIR / "responses_perfect.json").read_text())
    observed = parse_responses_document(
        (STUDY_DIR / "responses_observed.json").read_text())
    return truths, perfect, observed


class TestScoreAnswer:
    def test_exact_match_is_zero(self):
        v = AnswerVector((1, 0, 1, 0))
        assert score_answer(v, v) == ErrorCounts(0, 0)

    def test_one_spurious_one_missed(self):
        truth = AnswerVector((1, 1, 0, 0))   # {A, B}
        answer = AnswerVector((1, 0, 1, 0))  # {A, C}
        assert score_answer(answer, truth) == ErrorCounts(e1=1, e2=1)

    def test_idk_slot_is_an_ordinary_position(self):
        truth = AnswerVector((1, 1, 0))      # two features, idk off
        answer = AnswerVector((0, 0, 1))     # only idk selected
        assert score_answer(answer, truth) == ErrorCounts(e1=1, e2=2)

    def test_length_mismatch_rejected(self):
        with pytest.raises(StudyError):
            score_answer(AnswerVector((1, 0)), AnswerVector((1, 0, 0)))

    def test_symmetry_swaps_e1_and_e2(self, rng):
        for _ in range(500):
            n = rng.randint(1, 20)
            a = AnswerVector(tuple(rng.randint(0, 1) for _ in range(n)))
            t = AnswerVector(tuple(rng.randint(0, 1) for _ in range(n)))
            fwd = score_answer(a, t)
            rev = score_answer(t, a)
            assert (fwd.e1, fwd.e2) == (rev.e2, rev.e1)

    def test_matches_elementwise_brute_force(self, rng):
        for _ in range(10_000):
            n = rng.randint(1, 16)
            a = tuple(rng.randint(0, 1) for _ in range(n))
            t = tuple(rng.randint(0, 1) for _ in range(n))
            e1 = e2 = 0
            for i in range(n):
                if a[i] == 1 and t[i] == 0:
                    e1 += 1
                if t[i] == 1 and a[i] == 0:
                    e2 += 1
            assert score_answer(AnswerVector(a), AnswerVector(t)) == \
                ErrorCounts(e1, e2)


class TestAggregate:
    def test_fixture_design_yields_405_cells(self):
        truths, perfect, _ = load_fixture_study()
        matrix = aggregate_errors(perfect, truths)
        assert len(matrix) == 405  # 15 x 3 x 3 x 3
        assert matrix.missing == ()

    def test_perfect_responses_score_all_zero(self):
        truths, perfect, _ = load_fixture_study()
        matrix = aggregate_errors(perfect, truths)
        assert all(c == ErrorCounts(0, 0) for c in matrix.cells.values())

    def test_equals_brute_force_loop(self):
        truths, _, observed = load_fixture_study()
        matrix = aggregate_errors(observed, truths)
        for resp in observed:
            expected = score_answer(resp.answer,
                                    truths[(resp.instance_index, resp.question_index)])
            assert matrix.cells[resp.key] == expected

    def test_total_invariant_under_reordering(self, rng):
        truths, _, observed = load_fixture_study()
        shuffled = list(observed)
        rng.shuffle(shuffled)
        assert aggregate_errors(shuffled, truths).total_errors() == \
            aggregate_errors(observed, truths).total_errors()

    def test_missing_responses_flagged_not_zero_filled(self):
        truths, perfect, _ = load_fixture_study()
        matrix = aggregate_errors(perfect[:-2], truths)
        assert len(matrix) == 403
        assert len(matrix.missing) == 2

    def test_unknown_truth_key_rejected(self):
        truths, perfect, _ = load_fixture_study()
        bad = StudyResponse("p99", "fiper", 9, 9, perfect[0].answer, 1.0)
        with pytest.raises(StudyError):
            aggregate_errors([bad], truths)

    def test_duplicate_cell_rejected(self):
        truths, perfect, _ = load_fixture_study()
        with pytest.raises(StudyError):
            aggregate_errors([perfect[0], perfect[0]], truths)


class TestDeltaMatrix:
    def test_baseline_against_itself_is_zero(self):
        truths, _, observed = load_fixture_study()
        matrix = aggregate_errors(observed, truths)
        base_only = [r for r in observed if r.condition == "text"]
        renamed = base_only + [
            StudyResponse(r.participant_id, "text2", r.instance_index,
                          r.question_index, r.answer, r.completion_time)
            for r in base_only
        ]
        deltas = delta_error_matrix(aggregate_errors(renamed, truths), "text")
        assert all(d == DeltaCounts(0, 0) for d in deltas.values())

    def test_single_extra_error_shows_plus_one(self):
        truths, perfect, _ = load_fixture_study()
        mutated = []
        target_key = None
        for r in perfect:
            if r.condition == "fiper" and target_key is None:
                bits = list(r.answer.bits)
                flip = bits.index(0) if 0 in bits else 0
                bits[flip] = 1 - bits[flip]
                mutated.append(StudyResponse(r.participant_id, r.condition,
                                             r.instance_index, r.question_index,
                                             AnswerVector(tuple(bits)),
                                             r.completion_time))
                target_key = r.key
            else:
                mutated.append(r)
        deltas = delta_error_matrix(aggregate_errors(mutated, truths), "text")
        assert deltas[target_key].total == 1
        others = [d for k, d in deltas.items() if k != target_key]
        assert all(d.total == 0 for d in others)

    def test_matches_brute_force_subtraction(self, rng):
        truths, _, observed = load_fixture_study()
        matrix = aggregate_errors(observed, truths)
        deltas = delta_error_matrix(matrix, "text")
        for key, delta in deltas.items():
            condition, instance, question, participant = key
            base = matrix.cells[("text", instance, question, participant)]
            cell = matrix.cells[key]
            assert delta.e1 == cell.e1 - base.e1
            assert delta.e2 == cell.e2 - base.e2

    def test_unknown_baseline_rejected(self):
        truths, perfect, _ = load_fixture_study()
        with pytest.raises(StudyError):
            delta_error_matrix(aggregate_errors(perfect, truths), "nope")


class TestLatinSquare:
    def test_three_by_three_each_condition_once_per_position(self):
        orders = latin_square_order(3, 3)
        for pos in range(3):
            assert sorted(o[pos] for o in orders) == [0, 1, 2]

    def test_fifteen_participants_three_conditions(self):
        orders = latin_square_order(15, 3)
        assert len(orders) == 15
        for pos in range(3):
            counts = Counter(o[pos] for o in orders)
            assert counts == {0: 5, 1: 5, 2: 5}

    def test_each_ordering_is_a_permutation(self):
        for order in latin_square_order(10, 4):
            assert sorted(order) == [0, 1, 2, 3]

    def test_uneven_participants_balanced_within_one(self):
        orders = latin_square_order(4, 3)
        for pos in range(3):
            counts = Counter(o[pos] for o in orders)
            assert max(counts.values()) - min(counts.get(c, 0) for c in range(3)) <= 1

    def test_block_of_k_consecutive_rows_is_a_latin_square(self):
        orders = latin_square_order(9, 3)
        for start in (0, 3, 6):
            block = orders[start:start + 3]
            for pos in range(3):
                assert sorted(row[pos] for row in block) == [0, 1, 2]


class TestRawTLX:
    def test_all_zero(self):
        assert raw_tlx(TLXRatings(0, 0, 0, 0, 0, 0)) == 0.0

    def test_arithmetic_mean(self):
        assert raw_tlx(TLXRatings(20, 40, 60, 80, 100, 0)) == 50.0

    def test_off_step_rating_rejected(self):
        with pytest.raises(StudyError):
            TLXRatings(33, 0, 0, 0, 0, 0)

    def test_out_of_range_rejected(self):
        with pytest.raises(StudyError):
            TLXRatings(105, 0, 0, 0, 0, 0)

    def test_matches_mean_oracle(self, rng):
        for _ in range(10_000):
            vals = tuple(rng.randrange(0, 101, 5) for _ in range(6))
            assert raw_tlx(TLXRatings(*vals)) == sum(vals) / 6

    def test_bounded_by_input_extremes(self, rng):
        for _ in range(200):
            vals = tuple(rng.randrange(0, 101, 5) for _ in range(6))
            score = raw_tlx(TLXRatings(*vals))
            assert min(vals) <= score <= max(vals)


class TestUES:
    def test_all_threes(self):
        scores = ues_short_form(UESItems((3,) * 12))
        assert (scores.FA, scores.PU, scores.AE, scores.RW, scores.overall) == \
            (3, 3, 3, 3, 3)

    def test_all_fives_no_reverse_items(self):
        assert ues_short_form(UESItems((5,) * 12)).overall == 5.0

    def test_reverse_keyed_items(self):
        items = UESItems((5, 5, 5) + (3,) * 9)
        scores = ues_short_form(items, reverse_items=(0, 1, 2))
        assert scores.FA == 1.0
        assert scores.PU == 3.0

    def test_item_out_of_range_rejected(self):
        with pytest.raises(StudyError):
            UESItems((0,) + (3,) * 11)
        with pytest.raises(StudyError):
            UESItems((6,) + (3,) * 11)

    def test_matches_mean_oracle(self, rng):
        for _ in range(10_000):
            vals = tuple(rng.randint(1, 5) for _ in range(12))
            scores = ues_short_form(UESItems(vals))
            assert abs(scores.FA - sum(vals[0:3]) / 3) < 1e-12
            assert abs(scores.PU - sum(vals[3:6]) / 3) < 1e-12
            assert abs(scores.AE - sum(vals[6:9]) / 3) < 1e-12
            assert abs(scores.RW - sum(vals[9:12]) / 3) < 1e-12
            assert abs(scores.overall - sum(vals) / 12) < 1e-12


class TestCompletionTimes:
    def test_singleton_group(self):
        out = completion_time_summary({("fiper", 1): {"p01": 42.0}})
        assert out[("fiper", 1)]["median"] == 42.0

    def test_even_group_averages_middle_two(self):
        out = completion_time_summary(
            {("fiper", 1): {"p1": 10.0, "p2": 20.0, "p3": 30.0, "p4": 100.0}})
        assert out[("fiper", 1)]["median"] == 25.0

    def test_empty_group_rejected(self):
        with pytest.raises(StudyError):
            completion_time_summary({("fiper", 1): {}})

    def test_matches_sort_oracle(self, rng):
        for _ in range(300):
            n = rng.randint(1, 25)
            values = {f"p{i}": rng.uniform(1, 500) for i in range(n)}
            got = completion_time_summary({("c", 1): values})[("c", 1)]["median"]
            ordered = sorted(values.values())
            if n % 2:
                expected = ordered[n // 2]
            else:
                expected = (ordered[n // 2 - 1] + ordered[n // 2]) / 2
            assert got == pytest.approx(expected)


class TestScoreStudyReport:
    def test_report_shape_on_fixture(self):
        truths, _, observed = load_fixture_study()
        report = score_study(truths, observed, baseline_condition="text")
        assert report["design"]["scored_cells"] == 405
        assert set(report["totals"]) == {"text", "blocks", "fiper"}
        assert report["baseline"] == "text"
        assert len(report["deltas"]) == 270  # two non-baseline conditions
        assert len(report["median_times"]) == 9  # 3 conditions x 3 instances
        assert json.dumps(report)  # JSON-serializable

    def test_truths_document_validation(self):
        with pytest.raises(DocumentError):
            parse_truths_document("{}")
        with pytest.raises(DocumentError):
            parse_truths_document(
                '{"feature_count": 3, "truths": [{"instance": 1, "question": 1, '
                '"bits": [0, 1]}]}')

    def test_responses_document_validation(self):
        with pytest.raises(DocumentError):
            parse_responses_document('{"responses": [{"participant": "p"}]}')
