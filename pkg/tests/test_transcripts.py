"""Transcript ingestion: formats, segmentation, and error reporting."""

import json

import pytest

from altcut.intervals import TimeInterval
from altcut.transcript_io import (
    ParseError,
    detect_format,
    format_srt_timestamp,
    ingest_transcript,
    write_srt,
)


class TestSrt:
    def test_empty_document(self):
        t = ingest_transcript("", 1000, fmt="srt")
        assert len(t.words) == 0
        assert len(t.sentences) == 0
        assert t.source_duration_ms == 1000

    def test_three_cue_sentences(self, tiny_srt):
        # Hand-parse oracle: three one-word cues, one sentence each.
        t = ingest_transcript(tiny_srt, 1200)
        assert [s.text for s in t.sentences] == ["Hi.", "There.", "Bye."]
        assert [s.interval.to_pair() for s in t.sentences] == [
            [0, 500],
            [500, 900],
            [900, 1200],
        ]
        assert [w.sentence_index for w in t.words] == [0, 1, 2]

    def test_inverted_cue_rejected(self):
        doc = "1\n00:00:01,000 --> 00:00:00,500\nOops.\n"
        with pytest.raises(ParseError, match="before its start"):
            ingest_transcript(doc, 5000, fmt="srt")

    def test_overlapping_cues_rejected_with_first_conflict(self):
        doc = (
            "1\n00:00:00,000 --> 00:00:02,000\nOne.\n\n"
            "2\n00:00:01,500 --> 00:00:03,000\nTwo.\n"
        )
        with pytest.raises(ParseError, match="overlaps previous cue"):
            ingest_transcript(doc, 5000, fmt="srt")

    def test_malformed_timestamp_reports_line(self):
        doc = "1\n00:00:xx,000 --> 00:00:01,000\nHi.\n"
        with pytest.raises(ParseError, match="line 2"):
            ingest_transcript(doc, 5000, fmt="srt")

    def test_multi_word_cue_split_evenly(self):
        doc = "1\n00:00:00,000 --> 00:00:01,000\nOne two three four.\n"
        t = ingest_transcript(doc, 1000)
        assert [w.interval.to_pair() for w in t.words] == [
            [0, 250],
            [250, 500],
            [500, 750],
            [750, 1000],
        ]
        assert len(t.sentences) == 1

    def test_sentence_split_mid_cue(self):
        doc = "1\n00:00:00,000 --> 00:00:01,000\nHello there. Next one\n"
        t = ingest_transcript(doc, 1000)
        assert [s.text for s in t.sentences] == ["Hello there.", "Next one"]

    def test_words_clipped_to_duration(self):
        doc = "1\n00:00:00,000 --> 00:00:02,000\nOne two.\n"
        t = ingest_transcript(doc, 1500)
        assert t.words[-1].interval.end_ms == 1500
        assert t.source_duration_ms == 1500

    def test_word_past_duration_dropped(self):
        doc = "1\n00:00:00,000 --> 00:00:02,000\nOne two.\n"
        t = ingest_transcript(doc, 900)
        assert [w.text for w in t.words] == ["One"]


class TestWebVtt:
    def test_basic(self):
        doc = "WEBVTT\n\n00:00.000 --> 00:01.000\nHello there.\n"
        t = ingest_transcript(doc, 1000)
        assert len(t.sentences) == 1
        assert t.sentences[0].text == "Hello there."

    def test_header_required(self):
        doc = "00:00.000 --> 00:01.000\nHello.\n"
        with pytest.raises(ParseError, match="WEBVTT"):
            ingest_transcript(doc, 1000, fmt="vtt")

    def test_cue_identifiers_and_notes_skipped(self):
        doc = (
            "WEBVTT\n\nNOTE a comment\n\nintro-cue\n"
            "00:00:00.000 --> 00:00:01.000\nHi there.\n"
        )
        t = ingest_transcript(doc, 1000, fmt="vtt")
        assert t.sentences[0].text == "Hi there."

    def test_inline_tags_stripped(self):
        doc = "WEBVTT\n\n00:00.000 --> 00:01.000\n<v Ann>Hello <b>big</b> world.\n"
        t = ingest_transcript(doc, 1000)
        assert t.sentences[0].text == "Hello big world."


class TestWordJson:
    def test_exact_word_timing(self):
        entries = [
            {"text": "Hi.", "start_ms": 0, "end_ms": 300},
            {"text": "Big", "start_ms": 400, "end_ms": 600},
            {"text": "day.", "start_ms": 600, "end_ms": 900},
        ]
        t = ingest_transcript(json.dumps(entries), 1000)
        assert len(t.sentences) == 2
        assert t.sentences[1].interval == TimeInterval(400, 900)
        assert t.sentences[1].word_range == (1, 3)

    def test_invalid_json(self):
        with pytest.raises(ParseError, match="invalid JSON"):
            ingest_transcript("[{broken", 1000, fmt="json")

    def test_bad_entry(self):
        with pytest.raises(ParseError, match="entry 0"):
            ingest_transcript(json.dumps([{"text": "x"}]), 1000, fmt="json")


class TestDetectAndWrite:
    def test_detect(self, tiny_srt):
        assert detect_format("WEBVTT\n") == "vtt"
        assert detect_format('[{"text": "a"}]') == "json"
        assert detect_format(tiny_srt) == "srt"

    def test_duration_required_positive(self, tiny_srt):
        with pytest.raises(ParseError, match="positive"):
            ingest_transcript(tiny_srt, 0)

    def test_timestamp_round_trip(self):
        assert format_srt_timestamp(3_723_456) == "01:02:03,456"

    def test_write_then_parse(self, tiny_srt):
        t = ingest_transcript(tiny_srt, 1200)
        cues = [
            (s.interval.start_ms, s.interval.end_ms, s.text) for s in t.sentences
        ]
        again = ingest_transcript(write_srt(cues), 1200)
        assert again == t
