/**
 * Stacked timeline rows, one per variation.
 *
 * Row content comes from the pure layout module; this file only builds DOM
 * and wires hover/click interactions (frame-strip hover thumbnails, click
 * to seek through the mapping endpoint's pieces).
 */

import {
  editedRowBlocks,
  editedScale,
  effectMarkers,
  nearestFrame,
  sourceRowBlocks,
  sourceScale,
  type TimelineRow,
} from './timelineLayout';
import type { ClockMode, CoverageDto, ProjectDto, VariationDto } from './types';

export interface TimelineViewInput {
  project: ProjectDto;
  coverage: CoverageDto;
  variations: VariationDto[];
  /** Effect placements rendered above each row (effect stages only). */
  placementsOf?: (v: VariationDto) => VariationDto['payload']['placements'];
  clockMode: ClockMode;
  viewportPx: number;
}

/** Pure row models for the whole stack; shared by tests and the DOM layer. */
export function timelineRows(input: TimelineViewInput): TimelineRow[] {
  const { project, coverage, variations, clockMode, viewportPx } = input;
  const rows: TimelineRow[] = [];
  if (clockMode === 'edited') {
    const scale = editedScale(coverage, viewportPx);
    for (const v of variations) {
      const blocks = editedRowBlocks(v.id, coverage, project.sections, scale);
      const placements = input.placementsOf?.(v) ?? [];
      rows.push({
        variationId: v.id,
        widthPx: blocks.length ? blocks[blocks.length - 1].x + blocks[blocks.length - 1].width : 0,
        blocks,
        markers: effectMarkers(placements ?? [], scale),
      });
    }
  } else {
    const scale = sourceScale(project.source_duration_ms, viewportPx);
    for (const v of variations) {
      rows.push({
        variationId: v.id,
        widthPx: Math.round(project.source_duration_ms * scale),
        blocks: sourceRowBlocks(v, project.sections, scale),
        markers: [],
      });
    }
  }
  return rows;
}

export interface TimelineHandlers {
  onSeek?: (variationId: string, xPx: number) => void;
  onHover?: (variationId: string, xPx: number) => void;
}

export function mountTimeline(
  rows: TimelineRow[],
  handlers: TimelineHandlers = {},
): HTMLElement {
  const stack = document.createElement('div');
  stack.className = 'timeline-stack';
  for (const row of rows) {
    const rowEl = document.createElement('div');
    rowEl.className = 'timeline-row';
    rowEl.dataset.variation = row.variationId;
    rowEl.style.width = `${row.widthPx}px`;
    for (const block of row.blocks) {
      const blockEl = document.createElement('div');
      blockEl.className = `timeline-block ${block.kind} color-${block.colorIndex % 10}`;
      blockEl.style.left = `${block.x}px`;
      blockEl.style.width = `${block.width}px`;
      blockEl.dataset.section = block.sectionId;
      rowEl.appendChild(blockEl);
    }
    for (const marker of row.markers) {
      const markerEl = document.createElement('div');
      markerEl.className = `effect-marker flavor-${marker.flavor}`;
      markerEl.style.left = `${marker.x}px`;
      markerEl.style.width = `${marker.width}px`;
      markerEl.textContent = marker.label;
      rowEl.appendChild(markerEl);
    }
    rowEl.onclick = (event) =>
      handlers.onSeek?.(row.variationId, event.offsetX);
    rowEl.onmousemove = (event) =>
      handlers.onHover?.(row.variationId, event.offsetX);
    stack.appendChild(rowEl);
  }
  return stack;
}

/** Hover thumbnail: the frame-strip image nearest a source time. */
export function hoverThumbnail(project: ProjectDto, tSourceMs: number): string | null {
  const frame = nearestFrame(project.frame_strip, tSourceMs);
  return frame ? frame.image_ref : null;
}
