"""Coverage, pairwise diffs, and inclusion against the bitmap oracle."""

import random

import pytest

from altcut.diffing import (
    DiffError,
    diff_effects,
    diff_rough_cuts,
    inclusion_matrix,
    section_coverage,
    sentence_inclusion,
)
from altcut.intervals import TimeInterval, total_ms
from altcut.jsonutil import canonical_json
from altcut.model import (
    BRollPlacement,
    Provenance,
    RoughCut,
    Section,
    Variation,
)
from altcut.transcript_io import ingest_transcript
from oracles import bitmap_coverage, bitmap_diff, bitmap_inclusion, effect_key_match


def cut(*pairs):
    return RoughCut(tuple(TimeInterval(a, b) for a, b in pairs))


def rough(vid, *pairs, **kw):
    return Variation(vid, "rough_cut", cut(*pairs), Provenance("surprise"), **kw)


def sections_from(pairs):
    return [
        Section(f"sec{i}", f"S{i}", TimeInterval(a, b), i)
        for i, (a, b) in enumerate(pairs)
    ]


class TestCoverage:
    def test_fraction_example(self):
        sections = sections_from([(0, 10_000), (10_000, 30_000), (30_000, 60_000)])
        matrix = section_coverage(
            [rough("v1", (5_000, 15_000), (40_000, 50_000))], sections
        )
        # Per-millisecond membership oracle at 1 ms resolution.
        expected = bitmap_coverage(
            [(5_000, 15_000), (40_000, 50_000)],
            [(0, 10_000), (10_000, 30_000), (30_000, 60_000)],
            60_000,
        )
        assert [matrix.cell("v1", f"sec{i}").covered_ms for i in range(3)] == expected
        assert matrix.cell("v1", "sec0").fraction == 0.5
        assert matrix.cell("v1", "sec1").fraction == 0.25
        assert matrix.cell("v1", "sec2").fraction == 10_000 / 30_000

    def test_full_source_all_ones(self):
        sections = sections_from([(0, 10_000), (10_000, 30_000)])
        matrix = section_coverage([rough("v1", (0, 30_000))], sections)
        assert all(
            matrix.cell("v1", sec.id).fraction == 1.0 for sec in sections
        )

    def test_disjoint_zero(self):
        sections = sections_from([(0, 10_000), (10_000, 30_000)])
        matrix = section_coverage([rough("v1", (10_000, 11_000))], sections)
        assert matrix.cell("v1", "sec0").fraction == 0.0

    def test_coverage_conservation(self):
        # Sections partition the source, so row sums equal edited duration.
        sections = sections_from([(0, 7_000), (7_000, 20_000), (20_000, 60_000)])
        v = rough("v1", (3_000, 9_000), (30_000, 44_000))
        matrix = section_coverage([v], sections)
        assert (
            sum(matrix.cell("v1", sec.id).covered_ms for sec in sections)
            == v.rough_cut.edited_duration_ms
        )


class TestRoughDiff:
    def test_three_way_split_example(self):
        sections = sections_from([(0, 20_000)])
        report = diff_rough_cuts(cut((0, 10_000)), cut((5_000, 15_000)), sections)
        only_a, only_b, shared = bitmap_diff(
            [(0, 10_000)], [(5_000, 15_000)], 20_000
        )
        assert [s.to_pair() for s in report.only_in_a] == [list(p) for p in only_a]
        assert [s.to_pair() for s in report.only_in_b] == [list(p) for p in only_b]
        assert [s.to_pair() for s in report.shared] == [list(p) for p in shared]
        assert report.only_in_a == (TimeInterval(0, 5_000),)
        assert report.only_in_b == (TimeInterval(10_000, 15_000),)
        assert report.shared == (TimeInterval(5_000, 10_000),)

    def test_identical_inputs(self):
        sections = sections_from([(0, 20_000)])
        report = diff_rough_cuts(cut((2_000, 9_000)), cut((2_000, 9_000)), sections)
        assert report.only_in_a == report.only_in_b == ()
        assert report.shared == (TimeInterval(2_000, 9_000),)

    def test_antisymmetry(self):
        sections = sections_from([(0, 30_000)])
        a, b = cut((0, 10_000), (20_000, 25_000)), cut((5_000, 22_000))
        ab = diff_rough_cuts(a, b, sections)
        ba = diff_rough_cuts(b, a, sections)
        assert ab.only_in_a == ba.only_in_b
        assert ab.only_in_b == ba.only_in_a
        assert ab.shared == ba.shared

    def test_diff_completeness(self):
        a, b = cut((0, 10_000), (20_000, 25_000)), cut((5_000, 22_000))
        report = diff_rough_cuts(a, b, sections_from([(0, 30_000)]))
        assert (
            total_ms(list(report.only_in_a)) + total_ms(list(report.shared))
            == a.edited_duration_ms
        )

    def test_per_section_delta_consistent_with_coverage(self):
        sections = sections_from([(0, 10_000), (10_000, 30_000)])
        a, b = cut((0, 8_000)), cut((4_000, 20_000))
        report = diff_rough_cuts(a, b, sections)
        cov = section_coverage([rough("a", (0, 8_000)), rough("b", (4_000, 20_000))], sections)
        for sec in sections:
            assert report.per_section_delta[sec.id] == (
                cov.cell("a", sec.id).covered_ms - cov.cell("b", sec.id).covered_ms
            )

    def test_determinism_byte_identical(self):
        sections = sections_from([(0, 30_000)])
        a, b = cut((0, 10_000)), cut((5_000, 15_000))
        r1 = canonical_json(diff_rough_cuts(a, b, sections).to_dict())
        r2 = canonical_json(diff_rough_cuts(a, b, sections).to_dict())
        assert r1 == r2


def broll(vid, placements, parent="rc"):
    return Variation(
        vid,
        "broll",
        tuple(
            BRollPlacement(s, TimeInterval(1000 * s, 1000 * s + 500), k, m, "ref")
            for s, k, m in placements
        ),
        Provenance("surprise"),
        parent_id=parent,
    )


class TestEffectDiff:
    def test_restyled_example(self):
        a = broll("a", [(3, "bananas", "photo")])
        b = broll("b", [(3, "bananas", "illustration")])
        report = diff_effects(a, b)
        oracle = effect_key_match(
            [(3, "bananas", "photo")], [(3, "bananas", "illustration")]
        )
        assert len(report.effect_delta.restyled) == len(oracle["restyled"]) == 1
        entry = report.effect_delta.restyled[0]
        assert (entry.from_value, entry.to_value) == ("photo", "illustration")
        assert not report.effect_delta.added
        assert not report.effect_delta.removed

    def test_identical_sets_empty_delta(self):
        a = broll("a", [(1, "x", "photo"), (2, "y", "video")])
        b = broll("b", [(1, "x", "photo"), (2, "y", "video")])
        assert len(diff_effects(a, b).effect_delta) == 0

    def test_moved_example(self):
        a = broll("a", [(2, "k", "photo")])
        b = broll("b", [(7, "k", "photo")])
        report = diff_effects(a, b)
        oracle = effect_key_match([(2, "k", "photo")], [(7, "k", "photo")])
        assert oracle["moved"] == [("k", 2, 7)]
        assert len(report.effect_delta.moved) == 1
        move = report.effect_delta.moved[0]
        assert (move.keyword, move.from_sentence, move.to_sentence) == ("k", 2, 7)

    def test_added_and_removed(self):
        a = broll("a", [(1, "x", "photo")])
        b = broll("b", [(1, "x", "photo"), (4, "z", "video")])
        report = diff_effects(a, b)
        assert [p.keyword for p in report.effect_delta.added] == ["z"]
        assert not report.effect_delta.removed

    @pytest.mark.parametrize("seed", range(15))
    def test_matches_key_match_oracle(self, seed):
        rng = random.Random(seed)

        def random_items():
            items = []
            seen_keys = set()
            for _ in range(rng.randint(0, 8)):
                key = (rng.randint(0, 9), rng.choice("abcd"))
                if key in seen_keys:
                    continue
                seen_keys.add(key)
                items.append((key[0], key[1], rng.choice(["photo", "video"])))
            return items

        items_a, items_b = random_items(), random_items()
        a = broll("a", items_a)
        b = broll("b", items_b)
        report = diff_effects(a, b)
        oracle = effect_key_match(items_a, items_b)
        assert sorted(
            (p.sentence_index, p.keyword, p.media_type)
            for p in report.effect_delta.added
        ) == oracle["added"]
        assert sorted(
            (p.sentence_index, p.keyword, p.media_type)
            for p in report.effect_delta.removed
        ) == oracle["removed"]
        assert [
            (m.keyword, m.from_sentence, m.to_sentence)
            for m in report.effect_delta.moved
        ] == oracle["moved"]
        assert sorted(
            (r.sentence_index, r.keyword, r.from_value, r.to_value)
            for r in report.effect_delta.restyled
        ) == oracle["restyled"]

    def test_rough_cut_stage_rejected(self):
        a = rough("a", (0, 1_000))
        with pytest.raises(DiffError):
            diff_effects(a, a)

    def test_mismatched_ancestors_rejected(self, demo_project):
        workspace, pid = demo_project
        workspace.generate(pid, "rough_cut")
        workspace.select_variation(pid, "v9")
        first = workspace.generate(pid, "broll")[0]
        workspace.select_variation(pid, "v10")
        second = workspace.generate(pid, "broll")[0]
        project = workspace.get_project(pid)
        # second generation replaced the first; rebuild a stale variation
        stale = Variation(
            "stale", "broll", first.payload, first.provenance, parent_id="v9"
        )
        project.variations["broll"].append(stale)
        with pytest.raises(DiffError, match="ancestors"):
            diff_effects(stale, second, project)


class TestInclusion:
    def test_straddling_partial(self):
        doc = '[{"text": "One.", "start_ms": 900, "end_ms": 1200}]'
        t = ingest_transcript(doc, 2_000, fmt="json")
        assert sentence_inclusion([TimeInterval(0, 1_000)], t) == ("partial",)

    def test_full_source_all_full(self, demo_transcript):
        states = sentence_inclusion(
            [TimeInterval(0, demo_transcript.source_duration_ms)], demo_transcript
        )
        assert set(states) == {"full"}

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_word_level_oracle(self, seed, demo_transcript):
        rng = random.Random(seed)
        grid = demo_transcript.boundary_grid()
        points = sorted(rng.sample(grid, rng.randrange(2, 10, 2)))
        pairs = [(a, b) for a, b in zip(points[::2], points[1::2]) if a < b]
        if not pairs:
            pairs = [(grid[0], grid[-1])]
        spans = [TimeInterval(a, b) for a, b in pairs]
        v = Variation("v", "rough_cut", RoughCut(tuple(spans)), Provenance("surprise"))
        matrix = inclusion_matrix([v], demo_transcript)
        expected = bitmap_inclusion(
            pairs,
            [s.interval.to_pair() for s in demo_transcript.sentences],
            demo_transcript.source_duration_ms,
        )
        assert list(matrix.cells["v"]) == expected

    def test_cell_full_iff_inside_some_span(self, demo_transcript):
        s0 = demo_transcript.sentences[0]
        spans = [s0.interval]
        assert sentence_inclusion(spans, demo_transcript)[0] == "full"
