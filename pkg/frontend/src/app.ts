/**
 * Workspace controller: API data in, view state out.
 *
 * Data is fetched once per project/stage and cached; view toggles (clock
 * mode, view mode, hover) are pure state transitions that issue no requests
 * at all. Mutations go through the API one at a time and the affected
 * listings are re-fetched after commit, so the UI never shows optimistic
 * results for generation actions.
 */

import { ApiClient } from './api';
import {
  initialViewState,
  setClockMode,
  setHover,
  setSort,
  setStage,
  setViewMode,
  toggleClockMode,
  toggleSelected,
  type SortChoice,
  type ViewState,
} from './state';
import type {
  ClockMode,
  CoverageDto,
  InclusionDto,
  MappingDto,
  ProjectDto,
  RefineResponseDto,
  Stage,
  VariationDto,
  ViewMode,
} from './types';

export interface StageData {
  order: string[];
  variations: VariationDto[];
  coverage: CoverageDto;
  inclusion: InclusionDto;
}

export class WorkspaceController {
  state: ViewState = initialViewState();
  project: ProjectDto | null = null;
  stageData: Partial<Record<Stage, StageData>> = {};
  private mappings = new Map<string, MappingDto>();
  private mutationInFlight = false;

  constructor(
    private api: ApiClient,
    private projectId: string,
    private onChange: () => void = () => {},
  ) {}

  async load(): Promise<void> {
    this.project = await this.api.getProject(this.projectId);
    await this.loadStage(this.state.activeStage);
  }

  async loadStage(stage: Stage): Promise<void> {
    const sort = this.state.sort;
    const [list, coverage, inclusion] = await Promise.all([
      this.api.listVariations(this.projectId, stage, sort.field, sort.direction),
      this.api.getCoverage(this.projectId, stage),
      this.api.getInclusion(this.projectId, stage),
    ]);
    this.stageData[stage] = {
      order: list.order,
      variations: list.variations,
      coverage,
      inclusion,
    };
    this.onChange();
  }

  async mapping(variationId: string): Promise<MappingDto> {
    let cached = this.mappings.get(variationId);
    if (!cached) {
      cached = await this.api.getMapping(this.projectId, variationId);
      this.mappings.set(variationId, cached);
    }
    return cached;
  }

  // View transitions: pure, request-free.

  setClockMode(mode: ClockMode): void {
    this.state = setClockMode(this.state, mode);
    this.onChange();
  }

  toggleClockMode(): void {
    this.state = toggleClockMode(this.state);
    this.onChange();
  }

  setViewMode(mode: ViewMode): void {
    this.state = setViewMode(this.state, mode);
    this.onChange();
  }

  toggleSelected(variationId: string): void {
    this.state = toggleSelected(this.state, variationId);
    this.onChange();
  }

  hover(target: Parameters<typeof setHover>[1]): void {
    this.state = setHover(this.state, target);
    this.onChange();
  }

  // Reads that hit the API (sorting is server-side).

  async applySort(sort: SortChoice): Promise<void> {
    this.state = setSort(this.state, sort);
    await this.loadStage(this.state.activeStage);
  }

  async switchStage(stage: Stage): Promise<void> {
    this.state = setStage(this.state, stage);
    await this.loadStage(stage);
  }

  // Mutations: one in flight at a time; listings reload after commit.

  private async mutate<T>(run: () => Promise<T>): Promise<T> {
    if (this.mutationInFlight) {
      throw new Error('another change is still being applied');
    }
    this.mutationInFlight = true;
    try {
      const result = await run();
      await this.loadStage(this.state.activeStage);
      return result;
    } finally {
      this.mutationInFlight = false;
    }
  }

  generate(n = 10): Promise<{ variations: VariationDto[] }> {
    return this.mutate(() =>
      this.api.generate(this.projectId, this.state.activeStage, n),
    );
  }

  refine(variationId: string, prompt: string): Promise<RefineResponseDto> {
    return this.mutate(() => this.api.refine(this.projectId, variationId, prompt));
  }

  recombine(ids: string[], prompt: string): Promise<{ variation: VariationDto }> {
    return this.mutate(() => this.api.recombine(this.projectId, ids, prompt));
  }

  surprise(): Promise<{ variation: VariationDto }> {
    return this.mutate(() =>
      this.api.surprise(this.projectId, this.state.activeStage),
    );
  }

  setStatus(variationId: string, status: 'normal' | 'pinned' | 'archived') {
    return this.mutate(() => this.api.setStatus(this.projectId, variationId, status));
  }

  select(variationId: string) {
    return this.mutate(async () => {
      const result = await this.api.select(this.projectId, variationId);
      this.project = await this.api.getProject(this.projectId);
      return result;
    });
  }
}
