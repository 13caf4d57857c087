/**
 * Synchronized scrolling across transcript columns.
 *
 * Each column reports the vertical offset of every rendered sentence row.
 * Scrolling one column anchors the others to the same source sentence, so
 * side-by-side transcripts stay within one sentence of each other even when
 * columns render different subsets (excluded sentences hidden in edited
 * mode) or different row heights.
 */

export interface ColumnGeometry {
  /** Top pixel offset of each rendered row, ascending. */
  rowTops: number[];
  /** Source sentence index of each rendered row, ascending. */
  rowSentences: number[];
}

/** Index into rowTops of the row at (or spanning) the given scrollTop. */
export function rowIndexAt(column: ColumnGeometry, scrollTop: number): number {
  const tops = column.rowTops;
  if (tops.length === 0) return 0;
  let lo = 0;
  let hi = tops.length - 1;
  while (lo < hi) {
    const mid = (lo + hi + 1) >> 1;
    if (tops[mid] <= scrollTop) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

/** Source sentence currently at the top of the column. */
export function sentenceAtTop(column: ColumnGeometry, scrollTop: number): number {
  if (column.rowSentences.length === 0) return 0;
  return column.rowSentences[rowIndexAt(column, scrollTop)];
}

/**
 * Scroll offset that puts the row for `sentence` (or its nearest rendered
 * neighbor) at the top of the target column.
 */
export function scrollTopForSentence(column: ColumnGeometry, sentence: number): number {
  const rows = column.rowSentences;
  if (rows.length === 0) return 0;
  let bestRow = 0;
  let bestGap = Infinity;
  for (let i = 0; i < rows.length; i++) {
    const gap = Math.abs(rows[i] - sentence);
    if (gap < bestGap) {
      bestGap = gap;
      bestRow = i;
    }
    if (rows[i] >= sentence && gap >= bestGap) break; // ascending, done
  }
  return column.rowTops[bestRow];
}

/** Target scrollTop for `target` when `source` sits at `scrollTop`. */
export function syncedScrollTop(
  source: ColumnGeometry,
  target: ColumnGeometry,
  scrollTop: number,
): number {
  return scrollTopForSentence(target, sentenceAtTop(source, scrollTop));
}
