import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { FetchLike } from '../src/api.js';

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), 'fixtures');

export interface RecordedResponse {
  status: number;
  body: unknown;
}

export function loadFixture(name: string): RecordedResponse {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), 'utf-8'));
}

export interface RecordedCall {
  url: string;
  method: string;
  headers: Record<string, string>;
  body: unknown;
}

/** fetch stub that replays recorded responses keyed by "METHOD path". */
export function fixtureFetch(routes: Record<string, RecordedResponse | string>): {
  fetchFn: FetchLike;
  calls: RecordedCall[];
} {
  const calls: RecordedCall[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    const method = init?.method ?? 'GET';
    const key = `${method} ${url.replace(/\?.*$/, '')}`;
    const route = routes[key];
    if (route === undefined) throw new Error(`no recorded response for ${key}`);
    const recorded = typeof route === 'string' ? loadFixture(route) : route;
    let body: unknown = null;
    if (typeof init?.body === 'string') body = JSON.parse(init.body);
    else if (init?.body instanceof FormData) body = init.body;
    calls.push({
      url,
      method,
      headers: (init?.headers ?? {}) as Record<string, string>,
      body,
    });
    return new Response(JSON.stringify(recorded.body), {
      status: recorded.status,
      headers: { 'Content-Type': 'application/json' },
    });
  };
  return { fetchFn, calls };
}
