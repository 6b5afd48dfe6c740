// Typed client for the SafeSpace JSON API. The UI talks to the server
// exclusively through this layer; fetch is injectable so tests can replay
// recorded responses.

import type {
  Alert,
  Assessment,
  Contact,
  Health,
  HistoryPage,
  QuestionnaireDef,
  Schedule,
  ToxicityReport,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ClientOptions {
  baseUrl?: string;
  token: string;
  fetchFn?: FetchLike;
}

export class SafeSpaceClient {
  private readonly baseUrl: string;
  private readonly token: string;
  private readonly fetchFn: FetchLike;

  constructor(options: ClientOptions) {
    this.baseUrl = (options.baseUrl ?? '').replace(/\/$/, '');
    this.token = options.token;
    this.fetchFn = options.fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown, form?: FormData): Promise<T> {
    const headers: Record<string, string> = { Authorization: `Bearer ${this.token}` };
    const init: RequestInit = { method, headers };
    if (form !== undefined) {
      init.body = form;
    } else if (body !== undefined) {
      headers['Content-Type'] = 'application/json';
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const error = payload?.error ?? { code: 'Unknown', message: `HTTP ${response.status}` };
      throw new ApiError(response.status, error.code, error.message);
    }
    return payload as T;
  }

  analyzeText(text: string): Promise<ToxicityReport> {
    return this.request('POST', '/api/analyze/text', { text });
  }

  analyzeImage(image: Blob, filename = 'screenshot.png'): Promise<ToxicityReport> {
    const form = new FormData();
    form.append('image', image, filename);
    return this.request('POST', '/api/analyze/image', undefined, form);
  }

  createSchedule(intervalSeconds: number): Promise<Schedule> {
    return this.request('POST', '/api/schedules', { interval_seconds: intervalSeconds });
  }

  listSchedules(): Promise<Schedule[]> {
    return this.request<{ schedules: Schedule[] }>('GET', '/api/schedules').then((r) => r.schedules);
  }

  checkIn(scheduleId: string): Promise<Schedule> {
    return this.request('POST', `/api/schedules/${scheduleId}/checkin`);
  }

  pauseSchedule(scheduleId: string): Promise<Schedule> {
    return this.request('POST', `/api/schedules/${scheduleId}/pause`);
  }

  resumeSchedule(scheduleId: string): Promise<Schedule> {
    return this.request('POST', `/api/schedules/${scheduleId}/resume`);
  }

  disarmSchedule(scheduleId: string): Promise<Schedule> {
    return this.request('POST', `/api/schedules/${scheduleId}/disarm`);
  }

  sos(body: { lat?: number; lon?: number; accuracy_m?: number; note?: string }): Promise<Alert> {
    return this.request('POST', '/api/sos', body);
  }

  getContacts(): Promise<Contact[]> {
    return this.request<{ contacts: Contact[] }>('GET', '/api/contacts').then((r) => r.contacts);
  }

  putContacts(contacts: Contact[]): Promise<Contact[]> {
    return this.request<{ contacts: Contact[] }>('PUT', '/api/contacts', { contacts }).then((r) => r.contacts);
  }

  getQuestionnaire(id: string): Promise<QuestionnaireDef> {
    return this.request('GET', `/api/questionnaire/${id}`);
  }

  submitQuestionnaire(id: string, answers: Record<string, number>): Promise<Assessment> {
    return this.request('POST', `/api/questionnaire/${id}/submit`, { answers });
  }

  getHistory(params: { since?: string; kind?: string; limit?: number; offset?: number } = {}): Promise<HistoryPage> {
    const query = new URLSearchParams();
    if (params.since) query.set('since', params.since);
    if (params.kind) query.set('kind', params.kind);
    if (params.limit !== undefined) query.set('limit', String(params.limit));
    if (params.offset !== undefined) query.set('offset', String(params.offset));
    const suffix = query.toString() ? `?${query}` : '';
    return this.request('GET', `/api/history${suffix}`);
  }

  healthz(): Promise<Health> {
    return this.request('GET', '/healthz');
  }
}
