/**
 * Typed client over the engine's public HTTP API.
 *
 * The UI computes no diff or alignment results of its own: every number it
 * shows comes from these endpoints. The fetch function is injectable so
 * contract tests can run against recorded responses.
 */

import type {
  ChangeSummaryDto,
  CoverageDto,
  InclusionDto,
  MappingDto,
  ProjectDto,
  RefineResponseDto,
  Stage,
  Status,
  VariationDto,
  VariationListDto,
} from './types';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ApiError {
  code: string;
  message: string;
  details?: unknown;
}

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw Object.assign(new Error((body as ApiError).message), body);
    }
    return body as T;
  }

  private post<T>(path: string, payload?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
  }

  getProject(pid: string): Promise<ProjectDto> {
    return this.request(`/projects/${pid}`);
  }

  listVariations(
    pid: string,
    stage: Stage,
    sort?: string,
    dir: 'asc' | 'desc' = 'asc',
  ): Promise<VariationListDto> {
    const params = new URLSearchParams({ stage });
    if (sort) {
      params.set('sort', sort);
      params.set('dir', dir);
    }
    return this.request(`/projects/${pid}/variations?${params}`);
  }

  getCoverage(pid: string, stage: Stage): Promise<CoverageDto> {
    return this.request(`/projects/${pid}/coverage?stage=${stage}`);
  }

  getInclusion(pid: string, stage: Stage): Promise<InclusionDto> {
    return this.request(`/projects/${pid}/inclusion?stage=${stage}`);
  }

  getMapping(pid: string, vid: string): Promise<MappingDto> {
    return this.request(`/projects/${pid}/variations/${vid}/mapping`);
  }

  getDiff(pid: string, a: string, b: string): Promise<unknown> {
    return this.request(`/projects/${pid}/diff?a=${a}&b=${b}`);
  }

  getSummary(pid: string, oldId: string, newId: string): Promise<ChangeSummaryDto> {
    return this.request(`/projects/${pid}/summary?old=${oldId}&new=${newId}`);
  }

  generate(pid: string, stage: Stage, n = 10): Promise<{ variations: VariationDto[] }> {
    return this.post(`/projects/${pid}/generate?stage=${stage}&n=${n}`);
  }

  refine(pid: string, vid: string, prompt: string): Promise<RefineResponseDto> {
    return this.post(`/projects/${pid}/variations/${vid}/refine`, { prompt });
  }

  recombine(
    pid: string,
    ids: string[],
    prompt: string,
  ): Promise<{ variation: VariationDto }> {
    return this.post(`/projects/${pid}/recombine`, { ids, prompt });
  }

  surprise(pid: string, stage: Stage): Promise<{ variation: VariationDto }> {
    return this.post(`/projects/${pid}/surprise?stage=${stage}`);
  }

  setStatus(pid: string, vid: string, status: Status): Promise<{ order: string[] }> {
    return this.request(`/projects/${pid}/variations/${vid}`, {
      method: 'PATCH',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ status }),
    });
  }

  select(pid: string, vid: string): Promise<{ selected: Record<Stage, string | null> }> {
    return this.post(`/projects/${pid}/select`, { vid });
  }

  exportUrl(pid: string, vid: string, format: string, other?: string): string {
    const params = new URLSearchParams({ format });
    if (other) params.set('other', other);
    return `${this.baseUrl}/projects/${pid}/export/${vid}?${params}`;
  }
}
