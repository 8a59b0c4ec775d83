"""The two baseline explanation presentations: raw rule text and blocks.

The text modality is the rule printed in the grammar of
:mod:`fiper.ruletext` followed by a prediction line. The block modality
breaks each predicate into a sequence of display blocks (feature label,
operator glyph, value tokens) for widget-style rendering.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import CategorySet, DatasetSchema, ExplanationBundle, NumericInterval
from .ruletext import emit_rule_text, format_number

__all__ = ["Block", "BlockGroup", "BlockSpec", "render_text_modality",
           "render_block_modality"]

ROLE_FEATURE = "feature"
ROLE_OPERATOR = "operator"
ROLE_VALUE = "value"


@dataclass(frozen=True)
class Block:
    role: str
    text: str


@dataclass(frozen=True)
class BlockGroup:
    blocks: tuple[Block, ...]


@dataclass(frozen=True)
class BlockSpec:
    """One block group per premise predicate, in premise order, plus the
    consequence group."""

    groups: tuple[BlockGroup, ...]
    consequence: BlockGroup


def render_text_modality(bundle: ExplanationBundle, schema: DatasetSchema) -> str:
    """Rule text plus a prediction line; deterministic and re-parsable."""
    return f"{emit_rule_text(bundle.rule, schema)}\nPrediction: {bundle.prediction}\n"


def _interval_group(feature: str, interval: NumericInterval) -> BlockGroup:
    lo_rel = "<" if interval.lower_open else "≤"
    hi_rel = "<" if interval.upper_open else "≤"
    if interval.lower is not None and interval.upper is not None:
        blocks = (
            Block(ROLE_VALUE, format_number(interval.lower)),
            Block(ROLE_OPERATOR, lo_rel),
            Block(ROLE_FEATURE, feature),
            Block(ROLE_OPERATOR, hi_rel),
            Block(ROLE_VALUE, format_number(interval.upper)),
        )
    elif interval.lower is not None:
        rel = ">" if interval.lower_open else "≥"
        blocks = (
            Block(ROLE_FEATURE, feature),
            Block(ROLE_OPERATOR, rel),
            Block(ROLE_VALUE, format_number(interval.lower)),
        )
    else:
        blocks = (
            Block(ROLE_FEATURE, feature),
            Block(ROLE_OPERATOR, hi_rel),
            Block(ROLE_VALUE, format_number(interval.upper)),
        )
    return BlockGroup(blocks)


def _set_group(feature: str, body: CategorySet) -> BlockGroup:
    blocks = [Block(ROLE_FEATURE, feature), Block(ROLE_OPERATOR, "∈")]
    blocks.extend(Block(ROLE_VALUE, label) for label in sorted(body.labels))
    return BlockGroup(tuple(blocks))


def render_block_modality(bundle: ExplanationBundle) -> BlockSpec:
    groups = []
    for pred in bundle.rule.premise:
        if isinstance(pred.body, NumericInterval):
            groups.append(_interval_group(pred.feature, pred.body))
        else:
            groups.append(_set_group(pred.feature, pred.body))
    consequence = BlockGroup((
        Block(ROLE_OPERATOR, "→"),
        Block(ROLE_VALUE, bundle.rule.consequence),
    ))
    return BlockSpec(tuple(groups), consequence)


def blocks_to_dict(spec: BlockSpec) -> dict:
    def group(g: BlockGroup) -> list[dict]:
        return [{"role": b.role, "text": b.text} for b in g.blocks]

    return {"groups": [group(g) for g in spec.groups],
            "consequence": group(spec.consequence)}
