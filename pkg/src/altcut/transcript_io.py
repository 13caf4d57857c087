"""Timed-text ingestion: SRT, WebVTT, and JSON word lists -> Transcript.

Cue-based formats (SRT/WebVTT) carry timing per cue, not per word; word
intervals are distributed evenly across their cue so that downstream interval
math has a word-level grid to work with. The JSON word-list format is the
exact contract for callers that already have word timestamps.

Sentences split at terminal punctuation (``.``, ``!``, ``?``) at the end of a
token; abbreviations are not special-cased.
"""

from __future__ import annotations

import json
import re

from altcut.intervals import TimeInterval
from altcut.model import Sentence, Transcript, Word


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_SRT_TIME = re.compile(r"^(\d{1,2}):(\d{2}):(\d{2})[,.](\d{3})$")
_VTT_TIME = re.compile(r"^(?:(\d{1,2}):)?(\d{2}):(\d{2})\.(\d{3})$")
_ARROW = re.compile(r"-->")
_TAG = re.compile(r"<[^>]*>")
_TRAILING_QUOTES = "\"'”’»)]"


def _parse_timestamp(token: str, pattern: re.Pattern, line: int) -> int:
    m = pattern.match(token.strip())
    if not m:
        raise ParseError(f"malformed timestamp {token.strip()!r}", line)
    groups = [int(g) if g else 0 for g in m.groups()]
    hours, minutes, seconds, millis = groups
    if minutes >= 60 or seconds >= 60:
        raise ParseError(f"malformed timestamp {token.strip()!r}", line)
    return ((hours * 60 + minutes) * 60 + seconds) * 1000 + millis


def _ends_sentence(token: str) -> bool:
    stripped = token.rstrip(_TRAILING_QUOTES)
    return bool(stripped) and stripped[-1] in ".!?"


def _split_cue_words(text: str, interval: TimeInterval, line: int) -> list[tuple[str, TimeInterval]]:
    tokens = text.split()
    if not tokens:
        return []
    width = interval.duration_ms
    if width < len(tokens):
        raise ParseError(
            f"cue of {width} ms is too short for {len(tokens)} words", line
        )
    out = []
    for i, token in enumerate(tokens):
        start = interval.start_ms + (i * width) // len(tokens)
        end = interval.start_ms + ((i + 1) * width) // len(tokens)
        out.append((token, TimeInterval(start, end)))
    return out


def build_transcript(
    timed_words: list[tuple[str, TimeInterval]], duration_ms: int
) -> Transcript:
    """Assemble words into sentences; clips word timing to [0, duration_ms)."""
    clipped: list[tuple[str, TimeInterval]] = []
    for text, interval in timed_words:
        if interval.start_ms >= duration_ms:
            continue
        end = min(interval.end_ms, duration_ms)
        clipped.append((text, TimeInterval(interval.start_ms, end)))

    for i, ((_, a), (_, b)) in enumerate(zip(clipped, clipped[1:])):
        if b.start_ms < a.end_ms:
            raise ParseError(
                f"overlapping words at index {i}: [{a.start_ms},{a.end_ms}) then "
                f"[{b.start_ms},{b.end_ms})"
            )

    words: list[Word] = []
    sentences: list[Sentence] = []
    sentence_start = 0
    for i, (text, interval) in enumerate(clipped):
        words.append(Word(text, interval, len(sentences)))
        if _ends_sentence(text) or i == len(clipped) - 1:
            chunk = words[sentence_start:]
            sentences.append(
                Sentence(
                    index=len(sentences),
                    text=" ".join(w.text for w in chunk),
                    interval=TimeInterval(
                        chunk[0].interval.start_ms, chunk[-1].interval.end_ms
                    ),
                    word_range=(sentence_start, len(words)),
                )
            )
            sentence_start = len(words)
    return Transcript(tuple(words), tuple(sentences), duration_ms)


def _parse_cue_blocks(raw: str, time_pattern: re.Pattern, skip_index_line: bool):
    """Yield (start_ms, end_ms, text, line_number) for each cue."""
    lines = raw.splitlines()
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        block_start = i
        block = []
        while i < len(lines) and lines[i].strip():
            block.append((lines[i], i + 1))
            i += 1
        # Locate the timing line within the block.
        timing_at = None
        for j, (text, _) in enumerate(block):
            if _ARROW.search(text):
                timing_at = j
                break
        if timing_at is None:
            first = block[0][0].strip()
            if first.upper().startswith(("WEBVTT", "NOTE", "STYLE", "REGION")):
                continue
            if skip_index_line and first.isdigit() and len(block) == 1:
                continue
            raise ParseError(f"cue block without a timing line: {first!r}",
                             block[0][1])
        timing_text, timing_line = block[timing_at]
        parts = _ARROW.split(timing_text)
        if len(parts) != 2:
            raise ParseError("malformed timing line", timing_line)
        start = _parse_timestamp(parts[0], time_pattern, timing_line)
        end_token = parts[1].strip().split()[0] if parts[1].strip() else ""
        end = _parse_timestamp(end_token, time_pattern, timing_line)
        text = " ".join(t for t, _ in block[timing_at + 1:])
        yield start, end, text, timing_line


def _cues_to_words(cues) -> list[tuple[str, TimeInterval]]:
    timed: list[tuple[str, TimeInterval]] = []
    previous_end = 0
    previous_line = None
    for start, end, text, line in cues:
        if end <= start:
            raise ParseError(f"cue ends at {end} ms, before its start {start} ms", line)
        if start < previous_end:
            raise ParseError(
                f"cue at {start} ms overlaps previous cue ending at "
                f"{previous_end} ms (see line {previous_line})",
                line,
            )
        clean = _TAG.sub("", text)
        timed.extend(_split_cue_words(clean, TimeInterval(start, end), line))
        previous_end = end
        previous_line = line
    return timed


def parse_srt(raw: str, duration_ms: int) -> Transcript:
    cues = _parse_cue_blocks(raw, _SRT_TIME, skip_index_line=True)
    return build_transcript(_cues_to_words(cues), duration_ms)


def parse_webvtt(raw: str, duration_ms: int) -> Transcript:
    stripped = raw.lstrip("﻿")
    if not stripped.strip():
        return build_transcript([], duration_ms)
    if not stripped.lstrip().startswith("WEBVTT"):
        raise ParseError("missing WEBVTT header", 1)
    cues = _parse_cue_blocks(stripped, _VTT_TIME, skip_index_line=False)
    return build_transcript(_cues_to_words(cues), duration_ms)


def parse_word_json(raw: str, duration_ms: int) -> Transcript:
    try:
        entries = json.loads(raw) if raw.strip() else []
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from e
    if not isinstance(entries, list):
        raise ParseError("expected a JSON array of {text, start_ms, end_ms}")
    timed = []
    for i, entry in enumerate(entries):
        try:
            text = entry["text"]
            interval = TimeInterval(int(entry["start_ms"]), int(entry["end_ms"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"word entry {i} is invalid: {e}") from e
        if not str(text).strip():
            raise ParseError(f"word entry {i} has empty text")
        timed.append((str(text), interval))
    return build_transcript(timed, duration_ms)


def detect_format(raw: str) -> str:
    head = raw.lstrip("﻿").lstrip()
    if head.startswith("WEBVTT"):
        return "vtt"
    if head.startswith(("[", "{")):
        return "json"
    return "srt"


def ingest_transcript(raw: str, duration_ms: int, fmt: str | None = None) -> Transcript:
    """Parse a timed-text document in any accepted format."""
    if duration_ms <= 0:
        raise ParseError(f"source duration must be positive, got {duration_ms}")
    fmt = fmt or detect_format(raw)
    if fmt == "srt":
        return parse_srt(raw, duration_ms)
    if fmt == "vtt":
        return parse_webvtt(raw, duration_ms)
    if fmt == "json":
        return parse_word_json(raw, duration_ms)
    raise ParseError(f"unknown transcript format {fmt!r}")


def format_srt_timestamp(t_ms: int) -> str:
    hours, rest = divmod(t_ms, 3_600_000)
    minutes, rest = divmod(rest, 60_000)
    seconds, millis = divmod(rest, 1000)
    return f"{hours:02d}:{minutes:02d}:{seconds:02d},{millis:03d}"


def write_srt(cues: list[tuple[int, int, str]]) -> str:
    """Render (start_ms, end_ms, text) cues as an SRT document."""
    blocks = []
    for i, (start, end, text) in enumerate(cues, start=1):
        blocks.append(
            f"{i}\n{format_srt_timestamp(start)} --> {format_srt_timestamp(end)}\n{text}\n"
        )
    return "\n".join(blocks)
