"""Deterministic offline analysis backend.

Implements every wire task with pure rules so the whole pipeline runs
reproducibly without a model: segmentation mirrors the rule-based splitter,
keywords come from the bundled concreteness lexicon, and generation selects
sections greedily by keyword density while honoring each augmentation cell's
length/focus/count constraints. Identical requests always produce identical
responses.

Edit prompts are parsed with a small verb grammar (remove / shorten / add /
extend a section; remove / add / move / restyle an effect keyword; "first
N ... from #k" selections for recombination). Unrecognized prompts return
the payload unchanged, which the engine reports as a no-op.
"""

from __future__ import annotations

import itertools
import re
from typing import Optional

from altcut.backends import CAPABILITIES, BackendError
from altcut.generation import tolerant_length_window_ms
from altcut.intervals import (
    TimeInterval,
    intersect_spans,
    merge_spans,
    subtract_spans,
    total_ms,
    union_spans,
)
from altcut.jsonutil import canonical_json
from altcut.model import MEDIA_TYPES, TEXT_STYLES, Sentence, Transcript, Word
from altcut.segmentation import (
    _fallback_title,
    lexicon_keywords,
    rule_based_boundaries,
)

_WORD_NUMBERS = {"one": 1, "two": 2, "three": 3, "four": 4, "five": 5}

_PLACEMENT_WIRE_FIELDS = ("sentence_index", "keyword", "media_type", "style", "asset_ref")


def _wire_placement(placement: dict) -> dict:
    """Strip payload-only fields (timing) down to the response contract."""
    return {k: placement[k] for k in _PLACEMENT_WIRE_FIELDS if k in placement}


def _rows_to_transcript(rows: list[dict], duration_ms: int) -> Transcript:
    """Rebuild a sentence-level transcript view from wire rows."""
    words = []
    sentences = []
    for i, row in enumerate(rows):
        interval = TimeInterval(int(row["start_ms"]), int(row["end_ms"]))
        words.append(Word(row["text"], interval, i))
        sentences.append(Sentence(i, row["text"], interval, (i, i + 1)))
    return Transcript(tuple(words), tuple(sentences), duration_ms)


class _SectionView:
    """Per-section working data for the greedy cut builders."""

    def __init__(self, row: dict, sentences: list[dict]):
        self.id = row["id"]
        self.title = row["title"]
        self.start = int(row["start_ms"])
        self.end = int(row["end_ms"])
        self.sentences = [
            s for s in sentences if self.start <= int(s["start_ms"]) < self.end
        ]
        self.kscore = sum(len(self._keywords(s)) for s in self.sentences)

    @staticmethod
    def _keywords(sentence_row: dict) -> list[str]:
        if "keywords" in sentence_row:
            return list(sentence_row["keywords"])
        return lexicon_keywords(sentence_row["text"])

    @property
    def duration(self) -> int:
        return self.end - self.start

    def prefix_end(self, target_ms: int) -> int:
        """End of the shortest sentence prefix covering >= target_ms."""
        if target_ms >= self.duration or not self.sentences:
            return self.end
        for s in self.sentences:
            end = min(int(s["end_ms"]), self.end)
            if end - self.start >= target_ms:
                return end
        return self.end

    def prefix_span(self, target_ms: int) -> TimeInterval:
        return TimeInterval(self.start, self.prefix_end(target_ms))


class MockBackend:
    capabilities = CAPABILITIES - {"summarize"}
    concurrency_safe = True

    def complete(self, request: dict) -> dict:
        task = request["task"]
        if task == "segment":
            return self._segment(request)
        if task == "keywords":
            return self._keywords(request)
        if task == "generate":
            if request.get("mode") == "surprise":
                return self._surprise(request)
            return self._generate(request)
        if task == "edit":
            if request.get("parents"):
                return self._recombine(request)
            return self._edit(request)
        raise BackendError(f"mock backend does not handle task {task!r}")

    # ------------------------------------------------------------------
    # Segmentation and keywords

    def _segment(self, request: dict) -> dict:
        duration = int(request["source_duration_ms"])
        transcript = _rows_to_transcript(request["sentences"], duration)
        boundaries = rule_based_boundaries(transcript)
        edges = [0] + boundaries + [duration]
        sections = []
        for i, (start, end) in enumerate(zip(edges, edges[1:])):
            keywords: list[str] = []
            for s in transcript.sentences:
                if start <= s.interval.start_ms < end:
                    for kw in lexicon_keywords(s.text):
                        if kw not in keywords:
                            keywords.append(kw)
            sections.append(
                {
                    "start_ms": start,
                    "title": _fallback_title(transcript, start, end, i),
                    "keywords": keywords[:8],
                }
            )
        return {"sections": sections}

    def _keywords(self, request: dict) -> dict:
        return {
            "keywords_by_sentence": [
                lexicon_keywords(row["text"]) for row in request["sentences"]
            ]
        }

    # ------------------------------------------------------------------
    # Rough cut construction

    def _section_views(self, request: dict) -> list[_SectionView]:
        return [
            _SectionView(row, request["sentences"]) for row in request["sections"]
        ]

    @staticmethod
    def _ranked(sections: list[_SectionView]) -> list[_SectionView]:
        return sorted(
            sections, key=lambda sec: (-sec.kscore, sec.start)
        )

    def _generate(self, request: dict) -> dict:
        stage = request["stage"]
        if stage == "rough_cut":
            spans = self._build_rough_cut(request, request.get("spec"))
            return {"spans": [s.to_pair() for s in spans]}
        placements = self._build_placements(request, request.get("spec"))
        return {"placements": placements}

    def _build_rough_cut(self, request: dict, spec: Optional[dict]) -> list[TimeInterval]:
        sections = self._section_views(request)
        duration = int(request["source_duration_ms"])
        spec = spec or {}
        length = spec.get("length_bucket")
        focus = spec.get("focus")

        if length is None and focus is None:
            # Unconstrained cell: half of every section, a balanced overview.
            spans = [
                sec.prefix_span((sec.duration + 1) // 2) for sec in sections
            ]
            return merge_spans(spans)

        if length is not None:
            lo, hi = tolerant_length_window_ms(length)
            window = (max(lo, 30_000), hi)
        else:
            window = (30_000, min(duration, 300_000))
        window = (min(window[0], duration), min(window[1], duration))

        if focus == "many_sections":
            spans = self._build_many_sections(sections, window)
        else:
            k_range = (1, 2) if focus == "focus_1_2_sections" else (3, 4)
            spans = self._build_focused(sections, window, k_range)
        if spans is None:
            # Infeasible cell: emit the best balanced attempt and let the
            # engine's validation decide its fate.
            spans = [sec.prefix_span((sec.duration + 1) // 2) for sec in sections]
        return merge_spans(spans)

    def _build_focused(
        self,
        sections: list[_SectionView],
        window: tuple[int, int],
        k_range: tuple[int, int],
    ) -> Optional[list[TimeInterval]]:
        lo_w, hi_w = window
        ranked = self._ranked(sections)
        ks = [k for k in range(k_range[0], k_range[1] + 1) if k <= len(sections)]
        for k in ks:
            for combo in itertools.combinations(ranked, k):
                spans = self._fit_combo(list(combo), sections, lo_w, hi_w)
                if spans is not None:
                    return spans
        return None

    def _fit_combo(
        self,
        combo: list[_SectionView],
        sections: list[_SectionView],
        lo_w: int,
        hi_w: int,
    ) -> Optional[list[TimeInterval]]:
        full = sum(sec.duration for sec in combo)
        if lo_w <= full <= hi_w:
            return [TimeInterval(sec.start, sec.end) for sec in combo]
        if full > hi_w:
            halves = sum((sec.duration + 1) // 2 for sec in combo)
            if halves > hi_w:
                return None
            # Aim low in the window; sentence-granular prefixes only overshoot.
            aim = max(lo_w + (hi_w - lo_w) // 3, halves)
            targets = {}
            need_cut = full - aim
            for sec in sorted(combo, key=lambda s: (-s.duration, s.start)):
                room = sec.duration - (sec.duration + 1) // 2
                cut = min(need_cut, room)
                targets[sec.id] = sec.duration - cut
                need_cut -= cut
            if need_cut > 0:
                return None
            spans = [sec.prefix_span(targets[sec.id]) for sec in combo]
            if lo_w <= total_ms(spans) <= hi_w:
                return spans
            return None
        # Below the window: pad with sub-10% slivers of other sections.
        spans = [TimeInterval(sec.start, sec.end) for sec in combo]
        in_combo = {sec.id for sec in combo}
        shortfall = lo_w - full
        for sec in self._ranked(sections):
            if shortfall <= 0:
                break
            if sec.id in in_combo or not sec.sentences:
                continue
            sliver_end = min(int(sec.sentences[0]["end_ms"]), sec.end)
            sliver = sliver_end - sec.start
            if sliver <= 0 or 10 * sliver >= sec.duration:
                continue
            spans.append(TimeInterval(sec.start, sliver_end))
            shortfall -= sliver
        total = total_ms(merge_spans(spans))
        if lo_w <= total <= hi_w:
            return spans
        return None

    def _build_many_sections(
        self, sections: list[_SectionView], window: tuple[int, int]
    ) -> Optional[list[TimeInterval]]:
        lo_w, hi_w = window
        usable = [sec for sec in sections if sec.sentences]
        counts = {sec.id: 1 for sec in usable}

        def span_for(sec: _SectionView) -> TimeInterval:
            last = sec.sentences[min(counts[sec.id], len(sec.sentences)) - 1]
            return TimeInterval(sec.start, min(int(last["end_ms"]), sec.end))

        def current_total() -> int:
            return total_ms(merge_spans([span_for(sec) for sec in usable if counts[sec.id]]))

        needed = min(5, len(sections))
        # Shed lowest-scoring sections if even single sentences overflow.
        ranked = self._ranked(usable)
        while current_total() > hi_w and len([s for s in usable if counts[s.id]]) > needed:
            for sec in reversed(ranked):
                if counts[sec.id]:
                    counts[sec.id] = 0
                    break
        # Grow round-robin until the window floor is reached.
        progress = True
        while current_total() < lo_w and progress:
            progress = False
            for sec in ranked:
                if not counts[sec.id] or counts[sec.id] >= len(sec.sentences):
                    continue
                counts[sec.id] += 1
                if current_total() > hi_w:
                    counts[sec.id] -= 1
                    continue
                progress = True
                if current_total() >= lo_w:
                    break
        total = current_total()
        if not lo_w <= total <= hi_w:
            return None
        if len([s for s in usable if counts[s.id]]) < needed:
            return None
        return [span_for(sec) for sec in usable if counts[sec.id]]

    # ------------------------------------------------------------------
    # Effect placements

    def _included_keyword_rows(self, request: dict) -> list[dict]:
        spans = [TimeInterval(int(a), int(b)) for a, b in request.get("parent_spans", [])]
        rows = []
        for row in request["sentences"]:
            interval = TimeInterval(int(row["start_ms"]), int(row["end_ms"]))
            keywords = row.get("keywords")
            if keywords is None:
                keywords = lexicon_keywords(row["text"])
            if not keywords:
                continue
            if total_ms(intersect_spans([interval], spans)) == 0:
                continue
            rows.append({**row, "keywords": keywords})
        return sorted(rows, key=lambda r: (-len(r["keywords"]), r["index"]))

    def _build_placements(self, request: dict, spec: Optional[dict]) -> list[dict]:
        stage = request["stage"]
        spec = spec or {}
        candidates = self._included_keyword_rows(request)
        bucket = spec.get("effect_count_bucket")
        if bucket:
            lo, hi = {"n2_3": (2, 3), "n4_5": (4, 5), "n7_10": (7, 10)}[bucket]
            count = min(hi, len(candidates))
        else:
            count = min(5, len(candidates))

        if stage == "broll":
            styles = MEDIA_TYPES
            fixed = spec.get("media")
            field = "media_type"
        else:
            styles = TEXT_STYLES
            fixed = spec.get("style")
            field = "style"
        # Offset the pick window per style so sibling cells differ when the
        # candidate pool allows it.
        offset = styles.index(fixed) if fixed else 0
        if offset and len(candidates) < count + offset:
            offset = 0
        picked = candidates[offset:offset + count]

        placements = []
        for rank, row in enumerate(sorted(picked, key=lambda r: r["index"])):
            value = fixed or styles[rank % len(styles)]
            placements.append(
                {
                    "sentence_index": row["index"],
                    "keyword": row["keywords"][0],
                    field: value,
                }
            )
        return placements

    # ------------------------------------------------------------------
    # Surprise candidates

    def _surprise(self, request: dict) -> dict:
        stage = request["stage"]
        candidates: list[dict] = []
        if stage == "rough_cut":
            duration = int(request["source_duration_ms"])
            existing: list[TimeInterval] = []
            for payload in request.get("existing", []):
                existing = union_spans(
                    existing,
                    [TimeInterval(int(a), int(b)) for a, b in payload.get("spans", [])],
                )
            complement = subtract_spans([TimeInterval(0, duration)], existing)
            if complement:
                candidates.append({"spans": [s.to_pair() for s in complement]})
        seen = set()
        specs: list[Optional[dict]] = []
        if stage == "rough_cut":
            specs += [
                {"length_bucket": lb, "focus": f}
                for lb in ("under_2min", "between_2_4min", "between_4_5min")
                for f in ("focus_1_2_sections", "focus_3_4_sections", "many_sections")
            ]
        elif stage == "broll":
            specs += [
                {"media": m, "effect_count_bucket": c}
                for m in MEDIA_TYPES
                for c in ("n2_3", "n4_5", "n7_10")
            ]
        else:
            specs += [
                {"style": s, "effect_count_bucket": c}
                for s in TEXT_STYLES
                for c in ("n2_3", "n4_5", "n7_10")
            ]
        specs.append(None)
        limit = int(request.get("n_candidates", 10))
        for spec in specs:
            if len(candidates) >= limit:
                break
            if stage == "rough_cut":
                spans = self._build_rough_cut(request, spec)
                candidate = {"spans": [s.to_pair() for s in spans]}
            else:
                candidate = {"placements": self._build_placements(request, spec)}
            key = canonical_json(candidate)
            if key in seen:
                continue
            seen.add(key)
            candidates.append(candidate)
        return {"candidates": candidates[:limit] or [candidates_fallback(request)]}

    # ------------------------------------------------------------------
    # Prompt-driven edits

    def _match_section(self, request: dict, prompt: str) -> Optional[dict]:
        lowered = prompt.lower()
        quoted = re.findall(r"['\"]([^'\"]+)['\"]", prompt)
        for row in request["sections"]:
            title = row["title"].lower()
            if any(q.lower() == title for q in quoted) or title in lowered:
                return row
        return None

    def _edit(self, request: dict) -> dict:
        if request["stage"] == "rough_cut":
            return self._edit_rough_cut(request)
        return self._edit_effects(request)

    def _edit_rough_cut(self, request: dict) -> dict:
        payload = request["payload"]
        spans = [TimeInterval(int(a), int(b)) for a, b in payload.get("spans", [])]
        prompt = request.get("prompt", "")
        lowered = prompt.lower()
        section = self._match_section(request, prompt)
        if section is None:
            return {"spans": [s.to_pair() for s in spans]}
        sec_interval = TimeInterval(int(section["start_ms"]), int(section["end_ms"]))

        if any(verb in lowered for verb in ("remove", "drop", "cut out", "exclude")):
            spans = subtract_spans(spans, [sec_interval])
        elif "shorten" in lowered:
            spans = self._shorten_section(request, spans, section)
        elif any(verb in lowered for verb in ("add", "extend", "include", "more")):
            spans = union_spans(spans, [sec_interval])
        return {"spans": [s.to_pair() for s in merge_spans(spans)]}

    def _shorten_section(
        self, request: dict, spans: list[TimeInterval], section: dict
    ) -> list[TimeInterval]:
        sec_interval = TimeInterval(int(section["start_ms"]), int(section["end_ms"]))
        inside = intersect_spans(spans, [sec_interval])
        if not inside:
            return spans
        goal = total_ms(inside) // 2
        sentence_ends = sorted(
            min(int(s["end_ms"]), sec_interval.end_ms)
            for s in request["sentences"]
            if sec_interval.start_ms <= int(s["start_ms"]) < sec_interval.end_ms
        )
        kept: list[TimeInterval] = []
        budget = goal
        for piece in inside:
            if budget <= 0:
                break
            if piece.duration_ms <= budget:
                kept.append(piece)
                budget -= piece.duration_ms
                continue
            cut_at = None
            for end in sentence_ends:
                if piece.start_ms < end <= piece.start_ms + budget:
                    cut_at = end
            if cut_at is None:
                for end in sentence_ends:
                    if piece.start_ms < end < piece.end_ms:
                        cut_at = end
                        break
            if cut_at is not None and cut_at > piece.start_ms:
                kept.append(TimeInterval(piece.start_ms, cut_at))
            break
        if not kept:
            kept = [inside[0]]
        outside = subtract_spans(spans, [sec_interval])
        return union_spans(outside, kept)

    def _edit_effects(self, request: dict) -> dict:
        stage = request["stage"]
        field = "media_type" if stage == "broll" else "style"
        styles = MEDIA_TYPES if stage == "broll" else TEXT_STYLES
        placements = [_wire_placement(p) for p in request["payload"].get("placements", [])]
        prompt = request.get("prompt", "")
        lowered = prompt.lower()

        target = None
        quoted = re.findall(r"['\"]([^'\"]+)['\"]", prompt)
        for p in placements:
            kw = p["keyword"].lower()
            if any(q.lower() == kw for q in quoted) or kw in lowered:
                target = p
                break

        style_word = None
        for s in sorted(styles, key=len, reverse=True):
            tokens = {s, s.replace("_", " "), s.replace("_", "-"), s.split("_")[0]}
            if any(re.search(rf"\b{re.escape(t)}\b", lowered) for t in tokens):
                style_word = s
                break
        move_match = re.search(r"sentence\s+(\d+)", lowered)

        if target is not None and any(v in lowered for v in ("remove", "delete", "drop")):
            placements = [p for p in placements if p is not target]
        elif target is not None and "move" in lowered and move_match:
            target["sentence_index"] = int(move_match.group(1))
        elif target is not None and style_word is not None:
            target[field] = style_word
        elif "add" in lowered:
            added = self._add_effect(request, placements, quoted, lowered, field, style_word)
            if added is not None:
                placements.append(added)
        return {"placements": placements}

    def _add_effect(
        self,
        request: dict,
        placements: list[dict],
        quoted: list[str],
        lowered: str,
        field: str,
        style_word: Optional[str],
    ) -> Optional[dict]:
        used = {(p["sentence_index"], p["keyword"]) for p in placements}
        wanted = [q.lower() for q in quoted]
        for row in self._included_keyword_rows(request):
            for kw in row["keywords"]:
                mentioned = kw.lower() in lowered or any(w in kw.lower() for w in wanted)
                if not mentioned:
                    continue
                key = (row["index"], kw)
                if key in used:
                    continue
                default = "photo" if field == "media_type" else "lower_third"
                return {
                    "sentence_index": row["index"],
                    "keyword": kw,
                    field: style_word or default,
                }
        return None

    # ------------------------------------------------------------------
    # Recombination

    def _recombine(self, request: dict) -> dict:
        stage = request["stage"]
        parents = request["parents"]
        prompt = request.get("prompt", "")
        if stage == "rough_cut":
            spans: list[TimeInterval] = []
            for parent in parents:
                spans = union_spans(
                    spans,
                    [
                        TimeInterval(int(a), int(b))
                        for a, b in parent["payload"].get("spans", [])
                    ],
                )
            return {"spans": [s.to_pair() for s in spans]}

        picks = self._parse_selections(prompt, parents)
        if picks is None:
            merged: list[dict] = []
            seen = set()
            for parent in parents:
                for p in parent["payload"].get("placements", []):
                    key = (p["sentence_index"], p["keyword"])
                    if key not in seen:
                        seen.add(key)
                        merged.append(_wire_placement(p))
            picks = sorted(merged, key=lambda p: p["sentence_index"])[:10]
        return {"placements": picks}

    def _parse_selections(self, prompt: str, parents: list[dict]) -> Optional[list[dict]]:
        by_label = {parent["label"]: parent for parent in parents}
        pattern = re.compile(
            r"(first|last)\s+(\w+)?\s*[\w-]*\s*(?:images?|effects?|b-?rolls?)?\s*from\s*(#\d+)",
            re.IGNORECASE,
        )
        picks: list[dict] = []
        matched = False
        for which, count_word, label in pattern.findall(prompt):
            parent = by_label.get(label)
            if parent is None:
                continue
            matched = True
            rows = parent["payload"].get("placements", [])
            count = 1
            if count_word:
                word = count_word.lower()
                count = _WORD_NUMBERS.get(word) or (int(word) if word.isdigit() else 1)
            chosen = rows[:count] if which.lower() == "first" else rows[-count:]
            for p in chosen:
                entry = _wire_placement(p)
                if entry not in picks:
                    picks.append(entry)
        if not matched:
            return None
        return sorted(picks, key=lambda p: p["sentence_index"])


def candidates_fallback(request: dict) -> dict:
    """Last-resort surprise candidate: everything the source offers."""
    if request["stage"] == "rough_cut":
        return {"spans": [[0, int(request["source_duration_ms"])]]}
    return {"placements": []}
