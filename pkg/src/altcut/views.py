"""Response shapes shared by the HTTP API and the CLI's --format json output,
so both surfaces emit byte-identical canonical JSON for the same state."""

from __future__ import annotations

from altcut.generation import RefineResult
from altcut.model import Variation


def variations_view(order: list[str], variations: list[Variation]) -> dict:
    return {"order": order, "variations": [v.to_dict() for v in variations]}


def generate_view(variations: list[Variation]) -> dict:
    return {"variations": [v.to_dict() for v in variations]}


def refine_view(result: RefineResult) -> dict:
    return {
        "variation": result.variation.to_dict(),
        "summary": result.summary.to_dict(),
        "no_change": result.no_change,
    }


def recombine_view(variation: Variation) -> dict:
    return {"variation": variation.to_dict()}
