"""Canonical JSON serialization shared by persistence, exports, and the API.

Dict keys are sorted and separators fixed so equal structures always produce
byte-identical documents; golden-file and replay tests rely on this.
"""

from __future__ import annotations

import json
from typing import Any


def canonical_json(obj: Any) -> str:
    """Compact canonical form used for hashing, diff payloads, and API bodies."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_json_pretty(obj: Any) -> str:
    """Readable canonical form used for documents persisted to disk."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
