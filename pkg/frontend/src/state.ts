/**
 * View state for the comparison workspace.
 *
 * The clock mode applies uniformly to every visible variation (alignment is
 * the point of the tool), and all transitions are pure: toggling a view
 * never mutates project state and never requires a request.
 */

import type { ClockMode, Stage, ViewMode } from './types';

export interface SortChoice {
  field: string;
  direction: 'asc' | 'desc';
}

export interface HoverTarget {
  variationId: string;
  sectionId?: string;
  sentenceIndex?: number;
}

export interface ViewState {
  activeStage: Stage;
  viewMode: ViewMode;
  clockMode: ClockMode;
  sort: SortChoice;
  selectedIds: string[];
  hover: HoverTarget | null;
}

export const DEFAULT_SORTS: Record<Stage, SortChoice> = {
  rough_cut: { field: 'duration', direction: 'asc' },
  broll: { field: 'effect_count', direction: 'asc' },
  text_effects: { field: 'effect_count', direction: 'asc' },
};

export function initialViewState(stage: Stage = 'rough_cut'): ViewState {
  return {
    activeStage: stage,
    viewMode: 'timeline',
    clockMode: 'edited',
    sort: DEFAULT_SORTS[stage],
    selectedIds: [],
    hover: null,
  };
}

export function setClockMode(state: ViewState, clockMode: ClockMode): ViewState {
  return { ...state, clockMode };
}

export function toggleClockMode(state: ViewState): ViewState {
  return setClockMode(state, state.clockMode === 'edited' ? 'source' : 'edited');
}

export function setViewMode(state: ViewState, viewMode: ViewMode): ViewState {
  return { ...state, viewMode };
}

export function setStage(state: ViewState, stage: Stage): ViewState {
  return { ...state, activeStage: stage, sort: DEFAULT_SORTS[stage], selectedIds: [] };
}

export function setSort(state: ViewState, sort: SortChoice): ViewState {
  return { ...state, sort };
}

export function toggleSelected(state: ViewState, variationId: string): ViewState {
  const selected = state.selectedIds.includes(variationId)
    ? state.selectedIds.filter((id) => id !== variationId)
    : [...state.selectedIds, variationId];
  return { ...state, selectedIds: selected };
}

export function setHover(state: ViewState, hover: HoverTarget | null): ViewState {
  return { ...state, hover };
}
