/**
 * Side-by-side transcript columns.
 *
 * The pure model builder decides, per variation, which sentences render,
 * how they are dimmed (from the API's inclusion matrix), where section
 * headings sit, which substrings are bold (the API's visually concrete
 * keywords, verbatim), and which sentences carry effects. The DOM layer
 * below it only materializes that model.
 */

import type {
  InclusionState,
  PlacementDto,
  ProjectDto,
  SectionDto,
  SentenceDto,
} from './types';
import type { ClockMode } from './types';

export interface TextSegment {
  text: string;
  bold: boolean;
}

export interface TranscriptRowModel {
  sentenceIndex: number;
  state: InclusionState;
  /** Section heading rendered above this row, when the section starts here. */
  heading: { sectionId: string; title: string; colorIndex: number } | null;
  segments: TextSegment[];
  /** True when a B-roll or text effect anchors to this sentence. */
  effect: boolean;
}

/** Split a sentence into plain/bold segments at its keyword substrings. */
export function boldSegments(text: string, keywords: string[]): TextSegment[] {
  const ranges: [number, number][] = [];
  for (const keyword of keywords) {
    if (!keyword) continue;
    let from = 0;
    while (true) {
      const at = text.indexOf(keyword, from);
      if (at < 0) break;
      const overlaps = ranges.some(([a, b]) => at < b && a < at + keyword.length);
      if (!overlaps) ranges.push([at, at + keyword.length]);
      from = at + keyword.length;
    }
  }
  ranges.sort((a, b) => a[0] - b[0]);
  const segments: TextSegment[] = [];
  let cursor = 0;
  for (const [start, end] of ranges) {
    if (start > cursor) segments.push({ text: text.slice(cursor, start), bold: false });
    segments.push({ text: text.slice(start, end), bold: true });
    cursor = end;
  }
  if (cursor < text.length) segments.push({ text: text.slice(cursor), bold: false });
  return segments.length ? segments : [{ text, bold: false }];
}

function sectionOfSentence(sections: SectionDto[], sentence: SentenceDto) {
  return sections.find(
    (sec) => sec.start_ms <= sentence.start_ms && sentence.start_ms < sec.end_ms,
  );
}

/**
 * Rows for one variation's transcript column.
 *
 * Source mode shows every sentence with excluded ones dimmed; edited mode
 * hides excluded sentences entirely.
 */
export function transcriptColumnModel(
  project: ProjectDto,
  inclusionRow: InclusionState[],
  clockMode: ClockMode,
  placements: PlacementDto[] = [],
): TranscriptRowModel[] {
  const effectSentences = new Set(placements.map((p) => p.sentence_index));
  const rows: TranscriptRowModel[] = [];
  let lastSectionId: string | null = null;
  for (const sentence of project.transcript.sentences) {
    const state = inclusionRow[sentence.index] ?? 'excluded';
    if (clockMode === 'edited' && state === 'excluded') continue;
    const section = sectionOfSentence(project.sections, sentence);
    let heading = null;
    if (section && section.id !== lastSectionId) {
      heading = {
        sectionId: section.id,
        title: section.title,
        colorIndex: section.color_index,
      };
      lastSectionId = section.id;
    }
    rows.push({
      sentenceIndex: sentence.index,
      state,
      heading,
      segments: boldSegments(
        sentence.text,
        project.sentence_keywords[sentence.index] ?? [],
      ),
      effect: effectSentences.has(sentence.index),
    });
  }
  return rows;
}

export interface TranscriptColumnHandlers {
  onHeadingClick?: (sectionId: string) => void;
  onScrollSync?: (scrollTop: number) => void;
}

/** Materialize a column model into DOM; returns the scrollable element. */
export function mountTranscriptColumn(
  model: TranscriptRowModel[],
  variationId: string,
  handlers: TranscriptColumnHandlers = {},
): HTMLElement {
  const column = document.createElement('div');
  column.className = 'transcript-column';
  column.dataset.variation = variationId;
  for (const row of model) {
    if (row.heading) {
      const heading = document.createElement('h4');
      heading.className = `section-heading color-${row.heading.colorIndex % 10}`;
      heading.textContent = row.heading.title;
      heading.dataset.section = row.heading.sectionId;
      heading.onclick = () => handlers.onHeadingClick?.(row.heading!.sectionId);
      column.appendChild(heading);
    }
    const p = document.createElement('p');
    p.className = `sentence state-${row.state}` + (row.effect ? ' has-effect' : '');
    p.dataset.sentence = String(row.sentenceIndex);
    for (const segment of row.segments) {
      const node = segment.bold ? document.createElement('b') : document.createElement('span');
      node.textContent = segment.text;
      p.appendChild(node);
    }
    column.appendChild(p);
  }
  column.onscroll = () => handlers.onScrollSync?.(column.scrollTop);
  return column;
}

/** Geometry of a mounted column for cross-column scroll sync. */
export function measureColumn(column: HTMLElement): {
  rowTops: number[];
  rowSentences: number[];
} {
  const rowTops: number[] = [];
  const rowSentences: number[] = [];
  column.querySelectorAll<HTMLElement>('.sentence').forEach((node) => {
    rowTops.push(node.offsetTop);
    rowSentences.push(Number(node.dataset.sentence));
  });
  return { rowTops, rowSentences };
}
