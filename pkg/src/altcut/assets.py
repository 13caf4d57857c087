"""Stock-asset lookup for B-roll keywords.

The engine stores only keywords and media types on placements; asset
references are resolved through this client so they can be re-resolved
against a real stock API later. The bundled local catalog keeps everything
offline and deterministic.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from typing import Protocol, runtime_checkable


@runtime_checkable
class AssetSearchClient(Protocol):
    def query(self, keyword: str, media_type: str, limit: int = 1) -> list[str]: ...


def _slug(keyword: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", keyword.lower()).strip("-") or "asset"


class LocalCatalogClient:
    """Resolves keywords from the bundled catalog; unknown keywords get a
    deterministic synthetic reference so generation never stalls offline."""

    def __init__(self, catalog: dict | None = None):
        if catalog is None:
            text = resources.files("altcut").joinpath("data/asset_catalog.json").read_text(
                encoding="utf-8"
            )
            catalog = json.loads(text)
        self._catalog = catalog

    def query(self, keyword: str, media_type: str, limit: int = 1) -> list[str]:
        hits = self._catalog.get(media_type, {}).get(keyword.lower(), [])
        out = list(hits[:limit])
        index = len(out)
        while len(out) < limit:
            suffix = f"-{index + 1}" if index else ""
            out.append(f"local://{media_type}/{_slug(keyword)}{suffix}")
            index += 1
        return out
