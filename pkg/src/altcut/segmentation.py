"""Section partitioning and visually concrete keyword extraction.

Both operations go through a pluggable analysis backend; when the backend
fails (or emits garbage that cannot be repaired) a deterministic rule-based
path takes over so the engine always yields a usable, invariant-satisfying
result. Results carry a ``source`` flag so callers can audit fallbacks.

Rule-based segmentation: split where inter-sentence silence is at least
``GAP_THRESHOLD_MS``, then keep splitting any section longer than
``MAX_SECTION_MS`` at its longest internal gap.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources

from altcut.backends import AnalysisBackend, BackendError, validate_message
from altcut.intervals import TimeInterval, snap_to_grid
from altcut.model import Section, Transcript

logger = logging.getLogger(__name__)

GAP_THRESHOLD_MS = 3000
MAX_SECTION_MS = 90_000
TITLE_WORD_COUNT = 4
SECTION_KEYWORD_CAP = 8


class SegmentationError(ValueError):
    pass


@dataclass(frozen=True)
class SegmentationResult:
    sections: tuple[Section, ...]
    source: str  # "backend" | "fallback"
    repairs: tuple[str, ...] = ()


@dataclass(frozen=True)
class KeywordResult:
    by_sentence: tuple[tuple[str, ...], ...]
    source: str  # "backend" | "fallback"
    dropped: tuple[str, ...] = ()


# ---------------------------------------------------------------------------
# Rule-based segmentation


def rule_based_boundaries(
    transcript: Transcript,
    gap_threshold_ms: int = GAP_THRESHOLD_MS,
    max_section_ms: int = MAX_SECTION_MS,
) -> list[int]:
    """Internal section boundaries (sentence start times), sorted ascending."""
    sentences = transcript.sentences
    if len(sentences) < 2:
        return []
    gaps = transcript.sentence_gaps()
    boundaries = {
        sentences[i + 1].interval.start_ms
        for i, gap in enumerate(gaps)
        if gap >= gap_threshold_ms
    }

    def sections_from(bounds: list[int]) -> list[tuple[int, int]]:
        edges = [0] + bounds + [transcript.source_duration_ms]
        return list(zip(edges, edges[1:]))

    # Oversize sections split at their widest internal silence, repeatedly.
    while True:
        ordered = sorted(boundaries)
        split_at = None
        for start, end in sections_from(ordered):
            if end - start <= max_section_ms:
                continue
            best_gap = -1
            best_boundary = None
            for i, gap in enumerate(gaps):
                candidate = sentences[i + 1].interval.start_ms
                if start < candidate < end and candidate not in boundaries:
                    if gap > best_gap:
                        best_gap = gap
                        best_boundary = candidate
            if best_boundary is not None:
                split_at = best_boundary
                break
        if split_at is None:
            return sorted(boundaries)
        boundaries.add(split_at)


def _fallback_title(transcript: Transcript, start_ms: int, end_ms: int, position: int) -> str:
    for s in transcript.sentences:
        if start_ms <= s.interval.start_ms < end_ms:
            words = s.text.split()[:TITLE_WORD_COUNT]
            return " ".join(words).rstrip(".!?,;:").title() or f"Section {position + 1}"
    return f"Section {position + 1}"


def _section_keyword_pool(
    transcript: Transcript,
    keywords_by_sentence: list[tuple[str, ...]] | None,
    start_ms: int,
    end_ms: int,
) -> tuple[str, ...]:
    if not keywords_by_sentence:
        return ()
    pool: list[str] = []
    for s in transcript.sentences:
        if start_ms <= s.interval.start_ms < end_ms and s.index < len(keywords_by_sentence):
            for kw in keywords_by_sentence[s.index]:
                if kw not in pool:
                    pool.append(kw)
    return tuple(pool[:SECTION_KEYWORD_CAP])


def build_sections(
    transcript: Transcript,
    internal_boundaries: list[int],
    titles: dict[int, str] | None = None,
    section_keywords: dict[int, tuple[str, ...]] | None = None,
    keywords_by_sentence: list[tuple[str, ...]] | None = None,
) -> list[Section]:
    """Materialize a covering Section partition from boundary points.

    ``titles`` / ``section_keywords`` are keyed by boundary start value so
    backend-proposed metadata survives snapping and deduplication.
    """
    duration = transcript.source_duration_ms
    edges = [0] + sorted(set(internal_boundaries)) + [duration]
    out = []
    for i, (start, end) in enumerate(zip(edges, edges[1:])):
        title = (titles or {}).get(start) or _fallback_title(transcript, start, end, i)
        keywords = (section_keywords or {}).get(start) or _section_keyword_pool(
            transcript, keywords_by_sentence, start, end
        )
        out.append(Section(f"sec{i}", title, TimeInterval(start, end), i, keywords))
    return out


# ---------------------------------------------------------------------------
# Lexicon keyword fallback


def _load_lexicon() -> list[str]:
    text = resources.files("altcut").joinpath("data/concreteness_lexicon.txt").read_text(
        encoding="utf-8"
    )
    entries = []
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            entries.append(line)
    # Longest phrases first so "protein bar" wins over "bar".
    return sorted(set(entries), key=lambda e: (-len(e.split()), -len(e), e))


_LEXICON: list[str] | None = None


def concreteness_lexicon() -> list[str]:
    global _LEXICON
    if _LEXICON is None:
        _LEXICON = _load_lexicon()
    return _LEXICON


def lexicon_keywords(sentence_text: str, lexicon: list[str] | None = None) -> list[str]:
    """Concrete-noun phrases present in the sentence, verbatim, in order."""
    if lexicon is None:
        lexicon = concreteness_lexicon()
    else:
        lexicon = sorted(set(lexicon), key=lambda e: (-len(e.split()), -len(e), e))
    claimed: list[tuple[int, int]] = []
    hits: list[tuple[int, str]] = []
    for phrase in lexicon:
        pattern = re.compile(
            r"(?<![\w])" + re.escape(phrase).replace(r"\ ", r"\s+") + r"(?![\w])",
            re.IGNORECASE,
        )
        for m in pattern.finditer(sentence_text):
            span = m.span()
            if any(a < span[1] and span[0] < b for a, b in claimed):
                continue
            claimed.append(span)
            hits.append((span[0], m.group(0)))
    return [text for _, text in sorted(hits)]


# ---------------------------------------------------------------------------
# Backend-driven operations


def _sentence_rows(transcript: Transcript) -> list[dict]:
    return [
        {
            "index": s.index,
            "start_ms": s.interval.start_ms,
            "end_ms": s.interval.end_ms,
            "text": s.text,
        }
        for s in transcript.sentences
    ]


def segment_sections(transcript: Transcript, backend: AnalysisBackend) -> SegmentationResult:
    """Partition the source into contiguous sections on sentence boundaries."""
    if not transcript.sentences:
        raise SegmentationError("cannot segment an empty transcript")
    request = {
        "task": "segment",
        "sentences": _sentence_rows(transcript),
        "source_duration_ms": transcript.source_duration_ms,
        "constraints": {
            "min_gap_ms": GAP_THRESHOLD_MS,
            "max_section_ms": MAX_SECTION_MS,
        },
    }
    validate_message("request", request)
    try:
        response = backend.complete(request)
        validate_message("segment_response", response)
    except BackendError as e:
        logger.warning("segmentation backend failed (%s); using rule-based fallback", e)
        return _fallback_segmentation(transcript)

    grid = sorted(
        {
            s.interval.start_ms
            for s in transcript.sentences
            if 0 < s.interval.start_ms < transcript.source_duration_ms
        }
    )
    repairs: list[str] = []
    boundaries: list[int] = []
    titles: dict[int, str] = {}
    keywords: dict[int, tuple[str, ...]] = {}
    seen: set[int] = set()
    for proposal in response["sections"]:
        start = int(proposal["start_ms"])
        if start <= 0:
            snapped = 0
        elif not grid:
            repairs.append(f"dropped boundary {start}: no internal sentence starts")
            continue
        else:
            snapped = snap_to_grid(start, grid)
            if snapped != start:
                repairs.append(f"snapped boundary {start} -> {snapped}")
        if snapped in seen:
            repairs.append(f"merged empty section at {snapped}")
            continue
        seen.add(snapped)
        if proposal.get("title"):
            titles[snapped] = str(proposal["title"])
        if proposal.get("keywords"):
            keywords[snapped] = tuple(str(k) for k in proposal["keywords"])
        if snapped > 0:
            boundaries.append(snapped)

    sections = build_sections(transcript, sorted(boundaries), titles, keywords)
    return SegmentationResult(tuple(sections), "backend", tuple(repairs))


def _fallback_segmentation(transcript: Transcript) -> SegmentationResult:
    boundaries = rule_based_boundaries(transcript)
    keywords_by_sentence = [
        tuple(lexicon_keywords(s.text)) for s in transcript.sentences
    ]
    sections = build_sections(
        transcript, boundaries, keywords_by_sentence=keywords_by_sentence
    )
    return SegmentationResult(tuple(sections), "fallback")


def extract_visual_keywords(
    transcript: Transcript, backend: AnalysisBackend
) -> KeywordResult:
    """Per-sentence visually concrete keywords, each verbatim in its sentence."""
    if not transcript.sentences:
        raise SegmentationError("cannot extract keywords from an empty transcript")
    request = {"task": "keywords", "sentences": _sentence_rows(transcript)}
    validate_message("request", request)
    try:
        response = backend.complete(request)
        validate_message("keywords_response", response)
    except BackendError as e:
        logger.warning("keyword backend failed (%s); using lexicon fallback", e)
        by_sentence = tuple(
            tuple(lexicon_keywords(s.text)) for s in transcript.sentences
        )
        return KeywordResult(by_sentence, "fallback")

    raw = response["keywords_by_sentence"]
    dropped: list[str] = []
    by_sentence = []
    for s in transcript.sentences:
        row = raw[s.index] if s.index < len(raw) else []
        kept = []
        for kw in row:
            kw = str(kw)
            if kw in s.text and kw.strip():
                kept.append(kw)
            else:
                dropped.append(f"sentence {s.index}: {kw!r} not verbatim")
        by_sentence.append(tuple(kept))
    return KeywordResult(tuple(by_sentence), "backend", tuple(dropped))
