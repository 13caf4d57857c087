/**
 * Pure layout math for the timeline comparison view.
 *
 * Everything here scales numbers the API already computed (covered_ms from
 * the coverage matrix, span and placement intervals from variation payloads,
 * clock pieces from the mapping endpoint) into pixel rectangles. No diffing
 * or interval algebra happens client-side.
 *
 * Pixel edges are placed by rounding cumulative positions, so each block's
 * width differs from its exact share by less than one pixel and rows never
 * drift.
 */

import type {
  CoverageDto,
  MappingDto,
  PlacementDto,
  SectionDto,
  VariationDto,
} from './types';

export interface TimelineBlock {
  x: number;
  width: number;
  sectionId: string;
  colorIndex: number;
  /** 'included' renders solid, 'excluded' renders lighter. */
  kind: 'included' | 'excluded';
}

export interface EffectMarker {
  x: number;
  width: number;
  label: string;
  flavor: string; // media type or text style
}

export interface TimelineRow {
  variationId: string;
  widthPx: number;
  blocks: TimelineBlock[];
  markers: EffectMarker[];
}

/** Pixels per millisecond so the longest edited row fills the viewport. */
export function editedScale(coverage: CoverageDto, viewportPx: number): number {
  let maxTotal = 0;
  for (const vid of coverage.variations) {
    const row = coverage.cells[vid];
    const total = Object.values(row).reduce((sum, c) => sum + c.covered_ms, 0);
    maxTotal = Math.max(maxTotal, total);
  }
  return maxTotal > 0 ? viewportPx / maxTotal : 0;
}

/** Pixels per millisecond so the source-clock rows share one full width. */
export function sourceScale(sourceDurationMs: number, viewportPx: number): number {
  return sourceDurationMs > 0 ? viewportPx / sourceDurationMs : 0;
}

/**
 * Edited-clock row: one block per covered section, in section order,
 * packed end to end. Block widths come straight from covered_ms.
 */
export function editedRowBlocks(
  variationId: string,
  coverage: CoverageDto,
  sections: SectionDto[],
  pxPerMs: number,
): TimelineBlock[] {
  const row = coverage.cells[variationId];
  const blocks: TimelineBlock[] = [];
  let cursorMs = 0;
  for (const section of sections) {
    const covered = row[section.id]?.covered_ms ?? 0;
    if (covered === 0) continue;
    const x = Math.round(cursorMs * pxPerMs);
    const end = Math.round((cursorMs + covered) * pxPerMs);
    blocks.push({
      x,
      width: end - x,
      sectionId: section.id,
      colorIndex: section.color_index,
      kind: 'included',
    });
    cursorMs += covered;
  }
  return blocks;
}

/**
 * Source-clock row: every section at its source position (lighter), with
 * the variation's own spans drawn solid on top of them.
 */
export function sourceRowBlocks(
  variation: VariationDto,
  sections: SectionDto[],
  pxPerMs: number,
): TimelineBlock[] {
  const blocks: TimelineBlock[] = [];
  for (const section of sections) {
    const x = Math.round(section.start_ms * pxPerMs);
    const end = Math.round(section.end_ms * pxPerMs);
    blocks.push({
      x,
      width: end - x,
      sectionId: section.id,
      colorIndex: section.color_index,
      kind: 'excluded',
    });
  }
  const spans = variation.payload.spans ?? [];
  for (const [startMs, endMs] of spans) {
    const section = sections.find(
      (sec) => sec.start_ms <= startMs && startMs < sec.end_ms,
    );
    const x = Math.round(startMs * pxPerMs);
    const end = Math.round(endMs * pxPerMs);
    blocks.push({
      x,
      width: end - x,
      sectionId: section ? section.id : '',
      colorIndex: section ? section.color_index : 0,
      kind: 'included',
    });
  }
  return blocks;
}

/** Markers for B-roll / text-effect placements on the edited clock. */
export function effectMarkers(
  placements: PlacementDto[],
  pxPerMs: number,
): EffectMarker[] {
  return placements.map((p) => {
    const x = Math.round(p.start_ms * pxPerMs);
    const end = Math.round(p.end_ms * pxPerMs);
    return {
      x,
      width: Math.max(end - x, 1),
      label: p.keyword,
      flavor: p.media_type ?? p.style ?? '',
    };
  });
}

/** Edited-clock time for a source time, straight from the mapping pieces. */
export function sourceToEditedLookup(
  mapping: MappingDto,
  tSourceMs: number,
): number | null {
  for (const piece of mapping.pieces) {
    const [srcStart, srcEnd] = piece.source;
    if (srcStart <= tSourceMs && tSourceMs < srcEnd) {
      return piece.edited[0] + (tSourceMs - srcStart);
    }
  }
  return null;
}

/** Source-clock time for an edited time, straight from the mapping pieces. */
export function editedToSourceLookup(
  mapping: MappingDto,
  tEditedMs: number,
): number | null {
  for (const piece of mapping.pieces) {
    const [edStart, edEnd] = piece.edited;
    if (edStart <= tEditedMs && tEditedMs < edEnd) {
      return piece.source[0] + (tEditedMs - edStart);
    }
  }
  return null;
}

/** First included source millisecond of a section, via the mapping pieces. */
export function seekForSection(
  mapping: MappingDto,
  section: SectionDto,
): number | null {
  for (const piece of mapping.pieces) {
    const [srcStart, srcEnd] = piece.source;
    if (srcEnd > section.start_ms && srcStart < section.end_ms) {
      return Math.max(srcStart, section.start_ms);
    }
  }
  return null;
}

/** Frame-strip entry nearest to a source time (hover thumbnails). */
export function nearestFrame(
  frameStrip: { at_ms: number; image_ref: string }[],
  tSourceMs: number,
): { at_ms: number; image_ref: string } | null {
  let best = null;
  let bestGap = Infinity;
  for (const entry of frameStrip) {
    const gap = Math.abs(entry.at_ms - tSourceMs);
    if (gap < bestGap) {
      best = entry;
      bestGap = gap;
    }
  }
  return best;
}
