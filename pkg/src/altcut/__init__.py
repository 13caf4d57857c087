"""altcut: generate, align, diff, and curate alternative video edits over a
single source video's transcript."""

from altcut.alignment import (
    TimelineMapping,
    build_mapping,
    edited_to_source,
    source_to_edited,
)
from altcut.diffing import (
    CoverageMatrix,
    DiffReport,
    InclusionMatrix,
    diff_effects,
    diff_rough_cuts,
    inclusion_matrix,
    section_coverage,
)
from altcut.generation import (
    augmentation_matrix,
    generate_variations,
    novelty_score,
    recombine,
    refine,
    surprise_me,
    validate_and_repair,
)
from altcut.intervals import TimeInterval
from altcut.model import (
    BRollPlacement,
    GenerationSpec,
    Project,
    RoughCut,
    Section,
    Sentence,
    TextEffectPlacement,
    Transcript,
    Variation,
    Word,
)
from altcut.organize import SortKey, sort_variations
from altcut.segmentation import extract_visual_keywords, segment_sections
from altcut.summaries import ChangeSummary, summarize_changes
from altcut.transcript_io import ingest_transcript
from altcut.validation import validate_project
from altcut.workspace import Workspace

__version__ = "0.1.0"

__all__ = [
    "BRollPlacement",
    "ChangeSummary",
    "CoverageMatrix",
    "DiffReport",
    "GenerationSpec",
    "InclusionMatrix",
    "Project",
    "RoughCut",
    "Section",
    "Sentence",
    "SortKey",
    "TextEffectPlacement",
    "TimeInterval",
    "TimelineMapping",
    "Transcript",
    "Variation",
    "Word",
    "Workspace",
    "augmentation_matrix",
    "build_mapping",
    "diff_effects",
    "diff_rough_cuts",
    "edited_to_source",
    "extract_visual_keywords",
    "generate_variations",
    "inclusion_matrix",
    "ingest_transcript",
    "novelty_score",
    "recombine",
    "refine",
    "section_coverage",
    "segment_sections",
    "sort_variations",
    "source_to_edited",
    "summarize_changes",
    "surprise_me",
    "validate_and_repair",
    "validate_project",
    "__version__",
]
