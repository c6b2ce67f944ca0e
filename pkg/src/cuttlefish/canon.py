"""Canonical JSON bytes and content hashes.

Job identity is the SHA-256 of the canonical JSON encoding (sorted keys,
no whitespace), so semantically identical submissions deduplicate to the
same id regardless of key order or window ordering.
"""

from __future__ import annotations

import hashlib
import json


def canonical_json_bytes(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def content_hash(payload: dict) -> str:
    return hashlib.sha256(canonical_json_bytes(payload)).hexdigest()
