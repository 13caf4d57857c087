/** Wire types mirroring the engine's HTTP API JSON, verbatim. */

export type Stage = 'rough_cut' | 'broll' | 'text_effects';
export type Status = 'normal' | 'pinned' | 'archived';
export type ClockMode = 'edited' | 'source';
export type ViewMode = 'timeline' | 'transcript';
export type InclusionState = 'full' | 'partial' | 'excluded';

export interface WordDto {
  text: string;
  start_ms: number;
  end_ms: number;
  sentence_index: number;
}

export interface SentenceDto {
  index: number;
  text: string;
  start_ms: number;
  end_ms: number;
  word_start: number;
  word_end: number;
}

export interface TranscriptDto {
  source_duration_ms: number;
  words: WordDto[];
  sentences: SentenceDto[];
}

export interface SectionDto {
  id: string;
  title: string;
  start_ms: number;
  end_ms: number;
  color_index: number;
  keywords: string[];
}

export interface FrameStripEntryDto {
  at_ms: number;
  image_ref: string;
}

export interface PlacementDto {
  sentence_index: number;
  keyword: string;
  start_ms: number;
  end_ms: number;
  media_type?: string;
  style?: string;
  asset_ref?: string;
}

export interface VariationDto {
  id: string;
  stage: Stage;
  parent_id: string | null;
  payload: { spans?: [number, number][]; placements?: PlacementDto[] };
  status: Status;
  status_seq: number;
  provenance: {
    kind: string;
    spec?: Record<string, string>;
    prompt?: string;
    parent_ids?: string[];
    novelty?: number;
    low_novelty?: boolean;
  };
}

export interface ProjectDto {
  schema_version: number;
  project_id: string;
  source_duration_ms: number;
  transcript: TranscriptDto;
  sentence_keywords: string[][];
  sections: SectionDto[];
  frame_strip: FrameStripEntryDto[];
  variations: Record<Stage, VariationDto[]>;
  selected: Record<Stage, string | null>;
}

export interface VariationListDto {
  order: string[];
  variations: VariationDto[];
}

export interface CoverageCellDto {
  covered_ms: number;
  fraction: number;
}

export interface CoverageDto {
  variations: string[];
  sections: string[];
  cells: Record<string, Record<string, CoverageCellDto>>;
}

export interface InclusionDto {
  variations: string[];
  sentence_count: number;
  cells: Record<string, InclusionState[]>;
}

export interface MappingDto {
  pieces: { edited: [number, number]; source: [number, number] }[];
  edited_duration_ms: number;
}

export interface ChangeSummaryDto {
  lines: string[];
  structured: unknown;
}

export interface RefineResponseDto {
  variation: VariationDto;
  summary: ChangeSummaryDto;
  no_change: boolean;
}
