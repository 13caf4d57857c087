"""Deterministic fixtures shared across the test suite.

``build_demo_srt`` lays out a ~10.5 minute source with two long and eight
short topical blocks separated by 4-second silences, so the rule-based
segmenter recovers exactly ten sections and every augmentation-matrix cell
has room to fit. Keyword placement is fixed per block, giving the query
tests a known ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass

from altcut.transcript_io import format_srt_timestamp

SENTENCE_CONTENT_MS = 4600
INTRA_GAP_MS = 400
INTER_GAP_MS = 4000
TAIL_MS = 1000

# (sentence count, keyword pool) per block; keywords cycle through every
# second sentence. Pools use bundled-lexicon entries only.
DEMO_BLOCKS = [
    (17, ["campus", "library", "fountain"]),
    (17, ["dorm", "dining hall", "meal plan"]),
    (11, ["bananas", "grocery store"]),
    (11, ["protein bar", "strawberry"]),
    (11, ["bananas", "lemonade"]),
    (11, ["salad", "scissors"]),
    (11, ["hamburger", "restaurant"]),
    (11, ["coffee", "pancakes"]),
    (11, ["smoothie", "yogurt"]),
    (11, ["campus", "stadium"]),
]

_PLAIN_TEMPLATES = [
    "So that was really fun to see.",
    "Let me tell you more about it.",
    "I think you would enjoy this part.",
    "It took a while but was worth it.",
    "Honestly this surprised me quite a bit.",
]

_KEYWORD_TEMPLATES = [
    "Here you can see the {kw} up close.",
    "I really love this {kw} so much.",
    "Next we checked out the {kw} together.",
    "The {kw} was the highlight of my day.",
]


@dataclass(frozen=True)
class DemoLayout:
    srt: str
    duration_ms: int
    section_starts: list[int]  # expected internal boundaries (sentence starts)
    keyword_sentences: dict[str, list[int]]  # keyword -> sentence indices
    sentence_count: int


def build_demo_layout(blocks=None) -> DemoLayout:
    blocks = blocks if blocks is not None else DEMO_BLOCKS
    cues = []
    cursor = 0
    sentence_index = 0
    section_starts: list[int] = []
    keyword_sentences: dict[str, list[int]] = {}
    for block_no, (count, pool) in enumerate(blocks):
        if block_no > 0:
            section_starts.append(cursor)
        for j in range(count):
            start = cursor
            end = start + SENTENCE_CONTENT_MS
            if j == 0:
                # Unique per block so section titles never collide.
                text = f"Part {block_no + 1} of today begins now."
            elif j % 2 == 1:
                keyword = pool[(j // 2) % len(pool)]
                text = _KEYWORD_TEMPLATES[j % len(_KEYWORD_TEMPLATES)].format(kw=keyword)
                keyword_sentences.setdefault(keyword, []).append(sentence_index)
            else:
                text = _PLAIN_TEMPLATES[(sentence_index + block_no) % len(_PLAIN_TEMPLATES)]
            cues.append((start, end, text))
            sentence_index += 1
            cursor = end + (INTER_GAP_MS if j == count - 1 else INTRA_GAP_MS)
    duration = cursor - INTER_GAP_MS + TAIL_MS
    lines = []
    for i, (start, end, text) in enumerate(cues, start=1):
        lines.append(
            f"{i}\n{format_srt_timestamp(start)} --> {format_srt_timestamp(end)}\n{text}\n"
        )
    return DemoLayout(
        srt="\n".join(lines),
        duration_ms=duration,
        section_starts=section_starts,
        keyword_sentences=keyword_sentences,
        sentence_count=sentence_index,
    )


TINY_SRT = """1
00:00:00,000 --> 00:00:00,500
Hi.

2
00:00:00,500 --> 00:00:00,900
There.

3
00:00:00,900 --> 00:00:01,200
Bye.
"""
