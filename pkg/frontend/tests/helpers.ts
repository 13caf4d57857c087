/** Shared test helpers: fixture loading and a recording fake fetch. */

import { readFileSync } from 'node:fs';
import { fileURLToPath } from 'node:url';
import type { FetchLike } from '../src/api';

export function fixture<T>(name: string): T {
  const path = fileURLToPath(new URL(`../fixtures/${name}.json`, import.meta.url));
  return JSON.parse(readFileSync(path, 'utf-8')) as T;
}

export interface RecordedRequest {
  method: string;
  url: string;
}

export interface FakeFetch {
  fetch: FetchLike;
  requests: RecordedRequest[];
  reset(): void;
}

/**
 * Serves recorded API fixtures by URL and logs every request. Routes map a
 * URL substring to a fixture name (or literal body).
 */
export function fakeFetch(routes: Record<string, string | object>): FakeFetch {
  const requests: RecordedRequest[] = [];
  const impl: FetchLike = async (url, init) => {
    const method = init?.method ?? 'GET';
    requests.push({ method, url });
    for (const [pattern, target] of Object.entries(routes)) {
      if (url.includes(pattern)) {
        const body = typeof target === 'string' ? fixture(target) : target;
        return {
          ok: true,
          status: 200,
          json: async () => body,
        } as unknown as Response;
      }
    }
    return {
      ok: false,
      status: 404,
      json: async () => ({ code: 'not_found', message: `no route for ${url}` }),
    } as unknown as Response;
  };
  return {
    fetch: impl,
    requests,
    reset: () => {
      requests.length = 0;
    },
  };
}
