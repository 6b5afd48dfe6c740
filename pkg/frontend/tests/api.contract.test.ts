// Contract tests: the client layer is replayed against responses recorded
// from the real service (frontend/scripts/record_api_fixtures.py). The UI
// uses no endpoint, field, or status code beyond what these fixtures show.

import { describe, expect, it } from 'vitest';

import { ApiError, SafeSpaceClient } from '../src/api.js';
import type { Schedule, ToxicityReport } from '../src/types.js';
import { fixtureFetch, loadFixture } from './helpers.js';

const TOKEN = 'test-token';

function client(routes: Parameters<typeof fixtureFetch>[0]) {
  const { fetchFn, calls } = fixtureFetch(routes);
  return { api: new SafeSpaceClient({ baseUrl: '', token: TOKEN, fetchFn }), calls };
}

describe('analyze', () => {
  it('parses the recorded abusive report', async () => {
    const { api, calls } = client({ 'POST /api/analyze/text': 'analyze_abusive' });
    const report: ToxicityReport = await api.analyzeText("You're such a loser. I hate you.");
    expect(report.verdict).toBe('Abusive');
    expect(report.scores.TOXICITY).toBeGreaterThan(0.8);
    expect(report.spans.map((s) => s.matched)).toEqual(['loser', 'hate you']);
    expect(calls[0].headers.Authorization).toBe(`Bearer ${TOKEN}`);
    expect(calls[0].body).toEqual({ text: "You're such a loser. I hate you." });
  });

  it('parses the recorded clean report', async () => {
    const { api } = client({ 'POST /api/analyze/text': 'analyze_clean' });
    const report = await api.analyzeText('See you at lunch tomorrow!');
    expect(report.verdict).toBe('Clean');
    expect(report.spans).toEqual([]);
    expect(Object.values(report.scores).every((v) => v === 0)).toBe(true);
  });

  it('surfaces the recorded EmptyInput error as ApiError', async () => {
    const { api } = client({ 'POST /api/analyze/text': 'error_empty_text' });
    await expect(api.analyzeText('  ')).rejects.toMatchObject({
      name: 'ApiError',
      status: 422,
      code: 'EmptyInput',
    });
  });
});

describe('auth', () => {
  it('maps 401 to ApiError with the Unauthenticated code', async () => {
    const { api } = client({ 'GET /api/schedules': 'error_unauthenticated' });
    await expect(api.listSchedules()).rejects.toMatchObject({ status: 401, code: 'Unauthenticated' });
  });

  it('sends the bearer token on every request', async () => {
    const { api, calls } = client({
      'GET /api/contacts': 'contacts_get',
      'GET /api/history': 'history',
    });
    await api.getContacts();
    await api.getHistory();
    for (const call of calls) {
      expect(call.headers.Authorization).toBe(`Bearer ${TOKEN}`);
    }
  });
});

describe('schedules', () => {
  it('creates a schedule from the documented body shape', async () => {
    const { api, calls } = client({ 'POST /api/schedules': 'schedule_created' });
    const schedule: Schedule = await api.createSchedule(43200);
    expect(calls[0].body).toEqual({ interval_seconds: 43200 });
    expect(schedule.state).toBe('Active');
    expect(schedule.interval_seconds).toBe(43200);
    expect(Date.parse(schedule.next_deadline)).toBeGreaterThan(Date.parse(schedule.last_check_in));
  });

  it('check-in advances the recorded deadline', async () => {
    const created = loadFixture('schedule_created').body as Schedule;
    const { api } = client({
      [`POST /api/schedules/${created.schedule_id}/checkin`]: 'schedule_checkin',
    });
    const updated = await api.checkIn(created.schedule_id);
    expect(updated.schedule_id).toBe(created.schedule_id);
    expect(Date.parse(updated.next_deadline)).toBeGreaterThan(Date.parse(created.next_deadline));
  });

  it('rejects a too-short interval with the recorded 422', async () => {
    const { api } = client({ 'POST /api/schedules': 'error_interval_too_short' });
    await expect(api.createSchedule(30)).rejects.toMatchObject({ status: 422, code: 'IntervalTooShort' });
  });

  it('unwraps the schedules list envelope', async () => {
    const { api } = client({ 'GET /api/schedules': 'schedules_list' });
    const schedules = await api.listSchedules();
    expect(Array.isArray(schedules)).toBe(true);
    expect(schedules[0].schedule_id).toBeTruthy();
  });
});

describe('sos', () => {
  it('posts coordinates and parses the queued alert', async () => {
    const { api, calls } = client({ 'POST /api/sos': 'sos_alert' });
    const alert = await api.sos({ lat: 12.9716, lon: 77.5946, note: 'please call' });
    expect(calls[0].body).toEqual({ lat: 12.9716, lon: 77.5946, note: 'please call' });
    expect(alert.kind).toBe('Sos');
    expect(alert.status).toBe('Queued');
    expect(alert.message).toContain('12.971600');
    expect(alert.message).toContain('77.594600');
    expect(alert.message).toContain('https://maps.google.com/?q=12.971600,77.594600');
  });

  it('surfaces the recorded InvalidLocation error', async () => {
    const { api } = client({ 'POST /api/sos': 'error_bad_latitude' });
    await expect(api.sos({ lat: 95, lon: 10 })).rejects.toMatchObject({ status: 422, code: 'InvalidLocation' });
  });
});

describe('contacts', () => {
  it('round-trips the documented contact list envelope', async () => {
    const { api, calls } = client({ 'PUT /api/contacts': 'contacts_put' });
    const contacts = await api.putContacts([
      { name: 'Maya', email: 'maya@example.org', priority: 1 },
      { name: 'Ravi', email: 'ravi@example.org', priority: 2 },
    ]);
    expect((calls[0].body as { contacts: unknown[] }).contacts).toHaveLength(2);
    expect(contacts.map((c) => c.email)).toEqual(['maya@example.org', 'ravi@example.org']);
    expect(contacts.every((c) => typeof c.contact_id === 'string')).toBe(true);
  });
});

describe('questionnaire', () => {
  it('parses the recorded definition', async () => {
    const { api } = client({ 'GET /api/questionnaire/relationship_v1': 'questionnaire_definition' });
    const definition = await api.getQuestionnaire('relationship_v1');
    expect(definition.id).toBe('relationship_v1');
    expect(definition.questions).toHaveLength(20);
    expect(definition.questions[0].options.length).toBeGreaterThanOrEqual(2);
  });

  it('submits answers and receives the recorded caution assessment', async () => {
    const { api, calls } = client({
      'POST /api/questionnaire/relationship_v1/submit': 'assessment_sixty_percent',
    });
    const assessment = await api.submitQuestionnaire('relationship_v1', { q01: 3 });
    expect((calls[0].body as { answers: unknown }).answers).toEqual({ q01: 3 });
    expect(assessment.category).toBe('NeedsReflection');
    expect(assessment.positivity).toBe(0.6);
    expect(assessment.feedback).toBe('Caution – signs of concern. Please reflect.');
  });
});

describe('history and health', () => {
  it('parses the recorded history page', async () => {
    const { api } = client({ 'GET /api/history': 'history' });
    const page = await api.getHistory();
    expect(page.total).toBeGreaterThan(0);
    expect(page.events.length).toBe(page.total);
    const times = page.events.map((e) => Date.parse(e.occurred_at));
    expect([...times].sort((a, b) => b - a)).toEqual(times); // newest first
  });

  it('passes query parameters through', async () => {
    const { api, calls } = client({ 'GET /api/history': 'history' });
    await api.getHistory({ kind: 'CheckIn', limit: 10, offset: 5 });
    expect(calls[0].url).toContain('kind=CheckIn');
    expect(calls[0].url).toContain('limit=10');
    expect(calls[0].url).toContain('offset=5');
  });

  it('parses healthz', async () => {
    const { api } = client({ 'GET /healthz': 'healthz' });
    const health = await api.healthz();
    expect(health.status).toBe('ok');
    expect(health.outbox_pending).toBeGreaterThanOrEqual(0);
  });
});

describe('error envelope', () => {
  it('wraps unknown bodies in a generic ApiError', async () => {
    const { api } = client({ 'GET /api/schedules': { status: 502, body: {} } });
    const error = await api.listSchedules().catch((e: ApiError) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(502);
    expect((error as ApiError).code).toBe('Unknown');
  });
});
