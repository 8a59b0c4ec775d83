from __future__ import annotations

import random
from pathlib import Path

import pytest

from fiper.documents import load_dataset, parse_bundle, parse_schema
from fiper.stats import summarize_dataset

SAMPLE_DIR = Path(__file__).resolve().parents[1] / "sample_data" / "german_credit"


@pytest.fixture(scope="session")
def schema():
    return parse_schema((SAMPLE_DIR / "german_credit.schema.json").read_text())


@pytest.fixture(scope="session")
def dataset(schema):
    return load_dataset((SAMPLE_DIR / "german_credit.csv").read_text(), schema)


@pytest.fixture(scope="session")
def summaries(dataset):
    return summarize_dataset(dataset)


@pytest.fixture(scope="session")
def mixed_rule_bundle(schema):
    return parse_bundle((SAMPLE_DIR / "bundles" / "gc-001.bundle.json").read_text(),
                        schema)


@pytest.fixture(scope="session")
def empty_premise_bundle(schema):
    return parse_bundle((SAMPLE_DIR / "bundles" / "gc-002.bundle.json").read_text(),
                        schema)


@pytest.fixture(scope="session")
def numeric_rule_bundle(schema):
    return parse_bundle((SAMPLE_DIR / "bundles" / "gc-003.bundle.json").read_text(),
                        schema)


@pytest.fixture
def rng():
    return random.Random(0xF1BE5)
