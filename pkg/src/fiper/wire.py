"""Canonical JSON encoding shared by the service and the CLI so a
rendered document is byte-identical whichever surface produced it."""

from __future__ import annotations

import json

__all__ = ["encode_json"]


def encode_json(payload) -> bytes:
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False) \
        .encode("utf-8")
