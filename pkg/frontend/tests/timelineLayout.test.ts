/**
 * Timeline layout against recorded API fixtures: pixel widths must be
 * proportional to the coverage matrix's covered_ms within 1px rounding, and
 * clock lookups must follow the mapping endpoint's pieces exactly.
 */

import { describe, expect, it } from 'vitest';

import {
  editedRowBlocks,
  editedScale,
  editedToSourceLookup,
  effectMarkers,
  seekForSection,
  sourceRowBlocks,
  sourceScale,
  sourceToEditedLookup,
} from '../src/timelineLayout';
import { timelineRows } from '../src/timelineView';
import type {
  CoverageDto,
  MappingDto,
  ProjectDto,
  VariationListDto,
} from '../src/types';
import { fixture } from './helpers';

const project = fixture<ProjectDto>('project');
const coverage = fixture<CoverageDto>('coverage_rough_cut');
const roughList = fixture<VariationListDto>('variations_rough_cut');
const brollList = fixture<VariationListDto>('variations_broll');
const mappingV9 = fixture<MappingDto>('mapping_v9');

const VIEWPORT = 960;

describe('edited-clock rows', () => {
  const scale = editedScale(coverage, VIEWPORT);

  it('block widths are proportional to covered_ms within 1px', () => {
    for (const vid of coverage.variations) {
      const blocks = editedRowBlocks(vid, coverage, project.sections, scale);
      for (const block of blocks) {
        const covered = coverage.cells[vid][block.sectionId].covered_ms;
        expect(Math.abs(block.width - covered * scale)).toBeLessThanOrEqual(1);
      }
    }
  });

  it('row width is proportional to total edited duration within 1px', () => {
    for (const vid of coverage.variations) {
      const blocks = editedRowBlocks(vid, coverage, project.sections, scale);
      const total = Object.values(coverage.cells[vid]).reduce(
        (sum, cell) => sum + cell.covered_ms,
        0,
      );
      const rowWidth = blocks.length
        ? blocks[blocks.length - 1].x + blocks[blocks.length - 1].width
        : 0;
      expect(Math.abs(rowWidth - total * scale)).toBeLessThanOrEqual(1);
    }
  });

  it('blocks tile the row with no gaps or overlaps', () => {
    for (const vid of coverage.variations) {
      const blocks = editedRowBlocks(vid, coverage, project.sections, scale);
      for (let i = 1; i < blocks.length; i++) {
        expect(blocks[i].x).toBe(blocks[i - 1].x + blocks[i - 1].width);
      }
    }
  });

  it('the longest row fills the viewport', () => {
    const widths = coverage.variations.map((vid) => {
      const blocks = editedRowBlocks(vid, coverage, project.sections, scale);
      return blocks.length
        ? blocks[blocks.length - 1].x + blocks[blocks.length - 1].width
        : 0;
    });
    expect(Math.max(...widths)).toBeGreaterThanOrEqual(VIEWPORT - 1);
    expect(Math.max(...widths)).toBeLessThanOrEqual(VIEWPORT + 1);
  });

  it('skips sections the variation does not cover', () => {
    for (const vid of coverage.variations) {
      const blocks = editedRowBlocks(vid, coverage, project.sections, scale);
      const covered = new Set(
        project.sections
          .filter((sec) => coverage.cells[vid][sec.id].covered_ms > 0)
          .map((sec) => sec.id),
      );
      expect(new Set(blocks.map((b) => b.sectionId))).toEqual(covered);
    }
  });
});

describe('source-clock rows', () => {
  it('all rows share the full source width', () => {
    const rows = timelineRows({
      project,
      coverage,
      variations: roughList.variations,
      clockMode: 'source',
      viewportPx: VIEWPORT,
    });
    for (const row of rows) {
      expect(row.widthPx).toBe(VIEWPORT);
    }
  });

  it('draws every section lighter plus the variation spans solid', () => {
    const scale = sourceScale(project.source_duration_ms, VIEWPORT);
    const variation = roughList.variations[0];
    const blocks = sourceRowBlocks(variation, project.sections, scale);
    const excluded = blocks.filter((b) => b.kind === 'excluded');
    const included = blocks.filter((b) => b.kind === 'included');
    expect(excluded).toHaveLength(project.sections.length);
    expect(included).toHaveLength(variation.payload.spans!.length);
    for (const [i, [startMs, endMs]] of variation.payload.spans!.entries()) {
      expect(Math.abs(included[i].x - startMs * scale)).toBeLessThanOrEqual(1);
      expect(
        Math.abs(included[i].width - (endMs - startMs) * scale),
      ).toBeLessThanOrEqual(1);
    }
  });
});

describe('effect markers', () => {
  it('places one marker per placement with its keyword', () => {
    const withEffects = brollList.variations.find(
      (v) => (v.payload.placements ?? []).length > 0,
    )!;
    const markers = effectMarkers(withEffects.payload.placements!, 0.001);
    expect(markers).toHaveLength(withEffects.payload.placements!.length);
    expect(markers.map((m) => m.label)).toEqual(
      withEffects.payload.placements!.map((p) => p.keyword),
    );
  });
});

describe('clock lookups from the mapping endpoint', () => {
  it('round-trips edited times through the pieces', () => {
    for (let t = 0; t < mappingV9.edited_duration_ms; t += 997) {
      const source = editedToSourceLookup(mappingV9, t);
      expect(source).not.toBeNull();
      expect(sourceToEditedLookup(mappingV9, source!)).toBe(t);
    }
  });

  it('returns null for cut-out source times', () => {
    const covered = new Set<number>();
    for (const piece of mappingV9.pieces) {
      for (let t = piece.source[0]; t < piece.source[1]; t += 500) covered.add(t);
    }
    let checked = 0;
    for (let t = 0; t < project.source_duration_ms && checked < 50; t += 1111) {
      if (!covered.has(t)) {
        const inPiece = mappingV9.pieces.some(
          (p) => p.source[0] <= t && t < p.source[1],
        );
        if (!inPiece) {
          expect(sourceToEditedLookup(mappingV9, t)).toBeNull();
          checked += 1;
        }
      }
    }
    expect(checked).toBeGreaterThan(0);
  });

  it('seekForSection lands inside the section and inside the cut', () => {
    for (const section of project.sections) {
      const target = seekForSection(mappingV9, section);
      if (target === null) continue;
      expect(target).toBeGreaterThanOrEqual(section.start_ms);
      expect(target).toBeLessThan(section.end_ms);
      expect(sourceToEditedLookup(mappingV9, target)).not.toBeNull();
    }
  });
});
