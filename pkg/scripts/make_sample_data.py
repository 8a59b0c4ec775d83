"""Regenerates the committed sample_data/ fixture set. Deterministic."""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1] / "sample_data" / "german_credit"

SCHEMA = {
    "id": "german_credit",
    "target": {"name": "credit_risk", "classes": ["good", "bad"]},
    "features": [
        {"name": "account_check_status", "kind": "categorical",
         "domain": ["no checking account", "< 0 DM", "0 - 200 DM", ">= 200 DM"]},
        {"name": "duration_in_month", "kind": "numerical", "domain": [4, 72]},
        {"name": "credit_history", "kind": "categorical",
         "domain": ["all credits paid", "critical account", "delay in paying",
                    "existing credits paid", "no credits taken"]},
        {"name": "purpose", "kind": "categorical",
         "domain": ["business", "car (new)", "car (used)", "education",
                    "furniture", "radio/tv"]},
        {"name": "credit_amount", "kind": "numerical", "domain": [250, 18424]},
        {"name": "savings", "kind": "categorical",
         "domain": ["< 100 DM", "100 - 500 DM", ">= 500 DM", "unknown/none"]},
        {"name": "present_employed_since", "kind": "categorical",
         "domain": ["unemployed", "< 1 year", "1 - 4 years", "4 - 7 years",
                    ">= 7 years"]},
        {"name": "age", "kind": "numerical", "domain": [19, 75]},
        {"name": "housing", "kind": "categorical", "domain": ["own", "rent", "for free"]},
        {"name": "job", "kind": "categorical",
         "domain": ["unskilled", "skilled", "management"]},
    ],
}

# Sorted ages chosen so the type-7 five-number summary is exactly
# (19, 27, 33, 42, 75): with n=21 the quartile ranks 5, 10 and 15 fall on
# order statistics, no interpolation.
AGES = [19, 21, 22, 23, 25, 27, 28, 29, 30, 31, 33, 34, 36, 37, 40, 42, 45,
        52, 58, 64, 75]


def build_rows() -> list[dict]:
    rng = random.Random(7)
    ages = list(AGES)
    rng.shuffle(ages)
    rows = []
    cat_domains = {f["name"]: f["domain"] for f in SCHEMA["features"]
                   if f["kind"] == "categorical"}
    for i, age in enumerate(ages):
        row = {
            "account_check_status": rng.choice(cat_domains["account_check_status"]),
            "duration_in_month": rng.choice([6, 9, 12, 15, 18, 24, 30, 36, 48, 60, 72]),
            "credit_history": rng.choice(cat_domains["credit_history"]),
            "purpose": rng.choice(cat_domains["purpose"]),
            "credit_amount": rng.randrange(250, 18425, 25),
            "savings": rng.choice(cat_domains["savings"]),
            "present_employed_since": rng.choice(cat_domains["present_employed_since"]),
            "age": age,
            "housing": rng.choice(cat_domains["housing"]),
            "job": rng.choice(cat_domains["job"]),
            "credit_risk": rng.choice(["good", "good", "bad"]),
        }
        rows.append(row)
    return rows


BUNDLES = [
    {
        "id": "gc-001",
        "schema_ref": "german_credit",
        "instance": {
            "account_check_status": "< 0 DM",
            "duration_in_month": 24,
            "credit_history": "existing credits paid",
            "purpose": "education",
            "credit_amount": 1345,
            "savings": "< 100 DM",
            "present_employed_since": "< 1 year",
            "age": 23,
            "housing": "rent",
            "job": "skilled",
        },
        "prediction": "bad",
        "rule": {
            "premise": [
                {"feature": "present_employed_since", "kind": "set",
                 "labels": ["< 1 year", "unemployed"]},
                {"feature": "purpose", "kind": "set",
                 "labels": ["business", "education"]},
                {"feature": "age", "kind": "interval", "lower": 19, "upper": 31},
            ],
            "consequence": "bad",
        },
        "importance": [
            {"feature": "account_check_status", "weight": -0.35},
            {"feature": "housing", "weight": 0.30},
            {"feature": "age", "weight": 0.10},
            {"feature": "duration_in_month", "weight": 0.08},
            {"feature": "present_employed_since", "weight": -0.07},
            {"feature": "purpose", "weight": 0.05},
            {"feature": "credit_amount", "weight": -0.04},
            {"feature": "savings", "weight": 0.02},
            {"feature": "credit_history", "weight": 0.01},
            {"feature": "job", "weight": -0.005},
        ],
    },
    {
        "id": "gc-002",
        "schema_ref": "german_credit",
        "instance": {
            "account_check_status": "no checking account",
            "duration_in_month": 12,
            "credit_history": "all credits paid",
            "purpose": "radio/tv",
            "credit_amount": 804,
            "savings": ">= 500 DM",
            "present_employed_since": ">= 7 years",
            "age": 38,
            "housing": "own",
            "job": "management",
        },
        "prediction": "good",
        "rule": {"premise": [], "consequence": "good"},
        "importance": [
            {"feature": "savings", "weight": 0.22},
            {"feature": "account_check_status", "weight": 0.18},
            {"feature": "credit_amount", "weight": -0.05},
            {"feature": "age", "weight": 0.03},
        ],
    },
    {
        "id": "gc-003",
        "schema_ref": "german_credit",
        "instance": {
            "account_check_status": "0 - 200 DM",
            "duration_in_month": 36,
            "credit_history": "delay in paying",
            "purpose": "car (new)",
            "credit_amount": 7882,
            "savings": "< 100 DM",
            "present_employed_since": "1 - 4 years",
            "age": 45,
            "housing": "for free",
            "job": "skilled",
        },
        "prediction": "bad",
        "rule": "IF duration_in_month > 30 AND credit_amount >= 5000 "
                "AND housing IN {\"for free\", rent} THEN credit_risk = bad",
        "importance": [
            {"feature": "credit_amount", "weight": 0.31},
            {"feature": "duration_in_month", "weight": 0.24},
            {"feature": "housing", "weight": 0.09},
            {"feature": "credit_history", "weight": -0.08},
            {"feature": "savings", "weight": -0.06},
            {"feature": "purpose", "weight": 0.04},
            {"feature": "account_check_status", "weight": 0.02},
            {"feature": "job", "weight": 0.01},
        ],
    },
]

CONDITIONS = ["text", "blocks", "fiper"]
FEATURE_NAMES = [f["name"] for f in SCHEMA["features"]]


def truth_vector(features: list[str], idk: bool = False) -> list[int]:
    bits = [1 if name in features else 0 for name in FEATURE_NAMES]
    bits.append(1 if idk else 0)
    return bits


TRUTHS = {
    # Q1: features in the rule; Q2: predicate least relevant to the
    # prediction; Q3: most relevant predicate.
    (1, 1): truth_vector(["present_employed_since", "purpose", "age"]),
    (1, 2): truth_vector(["purpose"]),
    (1, 3): truth_vector(["age"]),
    (2, 1): truth_vector([]),
    (2, 2): truth_vector([]),
    (2, 3): truth_vector([], idk=True),
    (3, 1): truth_vector(["duration_in_month", "credit_amount", "housing"]),
    (3, 2): truth_vector(["housing"]),
    (3, 3): truth_vector(["credit_amount"]),
}


def perfect_responses() -> list[dict]:
    rng = random.Random(11)
    out = []
    for p in range(1, 16):
        order = [(p - 1 + pos) % 3 for pos in range(3)]
        for instance in (1, 2, 3):
            for slot, cond_idx in enumerate(order):
                condition = CONDITIONS[cond_idx]
                for question in (1, 2, 3):
                    out.append({
                        "participant": f"p{p:02d}",
                        "condition": condition,
                        "instance": instance,
                        "question": question,
                        "answer": list(TRUTHS[(instance, question)]),
                        "completion_time": round(
                            20 + 8 * slot + 5 * instance + rng.random() * 30, 1),
                    })
    return out


def observed_responses() -> list[dict]:
    # Same grid, with deterministic bit flips. The text condition gets the
    # most flips, fiper the fewest, loosely echoing the study's direction.
    rng = random.Random(23)
    flip_rate = {"text": 0.18, "blocks": 0.10, "fiper": 0.04}
    out = []
    for resp in perfect_responses():
        bits = list(resp["answer"])
        rate = flip_rate[resp["condition"]]
        for i in range(len(bits)):
            if rng.random() < rate:
                bits[i] = 1 - bits[i]
        slow = {"text": 0.9, "blocks": 1.0, "fiper": 1.25}[resp["condition"]]
        out.append({**resp, "answer": bits,
                    "completion_time": round(resp["completion_time"] * slow, 1)})
    return out


def main():
    ROOT.mkdir(parents=True, exist_ok=True)
    (ROOT / "bundles").mkdir(exist_ok=True)
    (ROOT / "study").mkdir(exist_ok=True)

    (ROOT / "german_credit.schema.json").write_text(
        json.dumps(SCHEMA, indent=2, ensure_ascii=False) + "\n")

    rows = build_rows()
    with open(ROOT / "german_credit.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=FEATURE_NAMES + ["credit_risk"])
        writer.writeheader()
        writer.writerows(rows)

    for bundle in BUNDLES:
        path = ROOT / "bundles" / f"{bundle['id']}.bundle.json"
        path.write_text(json.dumps(bundle, indent=2, ensure_ascii=False) + "\n")

    truths_doc = {
        "feature_count": len(FEATURE_NAMES),
        "truths": [
            {"instance": i, "question": q, "bits": bits}
            for (i, q), bits in sorted(TRUTHS.items())
        ],
    }
    (ROOT / "study" / "truth.json").write_text(
        json.dumps(truths_doc, indent=2) + "\n")
    (ROOT / "study" / "responses_perfect.json").write_text(
        json.dumps({"responses": perfect_responses()}, indent=2) + "\n")
    (ROOT / "study" / "responses_observed.json").write_text(
        json.dumps({"responses": observed_responses()}, indent=2) + "\n")
    print(f"wrote fixture set under {ROOT}")


if __name__ == "__main__":
    main()
