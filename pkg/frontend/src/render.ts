// Pure HTML renderers. Every view renders server-returned data only; there
// is no client-side re-scoring. All user content is escaped.

import { formatRemaining } from './countdown.js';
import type {
  Assessment,
  Contact,
  FlaggedSpan,
  HistoryEvent,
  Schedule,
  ToxicityReport,
} from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

/**
 * Wrap flagged spans in <mark>. Span offsets are byte positions into the
 * UTF-8 encoding of the analyzed text, so slicing happens on bytes and each
 * segment is decoded back before escaping.
 */
export function highlightSpans(text: string, spans: FlaggedSpan[]): string {
  const bytes = new TextEncoder().encode(text);
  const decoder = new TextDecoder();
  const ordered = [...spans].sort((a, b) => a.start - b.start);
  const parts: string[] = [];
  let cursor = 0;
  for (const span of ordered) {
    if (span.start < cursor) continue; // overlapping spans never happen server-side
    parts.push(escapeHtml(decoder.decode(bytes.slice(cursor, span.start))));
    const matched = decoder.decode(bytes.slice(span.start, span.start + span.length));
    parts.push(
      `<mark class="span" data-category="${span.category}" title="${span.category}">${escapeHtml(matched)}</mark>`,
    );
    cursor = span.start + span.length;
  }
  parts.push(escapeHtml(decoder.decode(bytes.slice(cursor))));
  return parts.join('');
}

const CATEGORY_ORDER = ['TOXICITY', 'SEVERE_TOXICITY', 'INSULT', 'THREAT', 'IDENTITY_ATTACK', 'PROFANITY'] as const;

export function renderReport(report: ToxicityReport, analyzedText: string): string {
  const bars = CATEGORY_ORDER.map((category) => {
    const score = report.scores[category] ?? 0;
    const pct = (score * 100).toFixed(1);
    return `
      <div class="score-row">
        <span class="score-label">${category}</span>
        <span class="score-bar"><span class="score-fill" style="width:${pct}%"></span></span>
        <span class="score-value">${score.toFixed(3)}</span>
      </div>`;
  }).join('');
  return `
    <div class="report">
      <span class="badge badge-${report.verdict.toLowerCase()}">${report.verdict}</span>
      <span class="report-meta">scorer: ${escapeHtml(report.scorer_id)} · source: ${report.source}</span>
      <div class="scores">${bars}</div>
      <div class="analyzed-text">${highlightSpans(analyzedText, report.spans)}</div>
    </div>`;
}

export function renderAssessment(assessment: Assessment): string {
  const dims = Object.entries(assessment.dimensions)
    .map(
      ([name, value]) => `
      <div class="score-row">
        <span class="score-label">${escapeHtml(name)}</span>
        <span class="score-bar"><span class="score-fill" style="width:${(value * 100).toFixed(1)}%"></span></span>
        <span class="score-value">${(value * 100).toFixed(0)}%</span>
      </div>`,
    )
    .join('');
  return `
    <div class="assessment">
      <span class="badge badge-${assessment.category.toLowerCase()}">${assessment.category}</span>
      <span class="positivity">positivity ${(assessment.positivity * 100).toFixed(0)}%</span>
      <p class="feedback">${escapeHtml(assessment.feedback)}</p>
      <div class="scores">${dims}</div>
    </div>`;
}

export function renderScheduleCard(schedule: Schedule, remaining: number | null): string {
  const countdown =
    schedule.state === 'Active' && remaining !== null ? formatRemaining(remaining) : schedule.state.toLowerCase();
  const actions: string[] = [];
  if (schedule.state === 'Active' || schedule.state === 'Triggered') {
    actions.push(`<button class="primary" data-action="checkin" data-id="${schedule.schedule_id}">I'm safe</button>`);
  }
  if (schedule.state === 'Active') {
    actions.push(`<button data-action="pause" data-id="${schedule.schedule_id}">Pause</button>`);
  }
  if (schedule.state === 'Paused') {
    actions.push(`<button data-action="resume" data-id="${schedule.schedule_id}">Resume</button>`);
  }
  if (schedule.state !== 'Disarmed') {
    actions.push(`<button data-action="disarm" data-id="${schedule.schedule_id}">Disarm</button>`);
  }
  const note =
    schedule.state === 'Triggered'
      ? '<p class="warn">Check-in missed and an alert was sent. Press "I\'m safe" to re-arm.</p>'
      : '';
  return `
    <div class="schedule-card state-${schedule.state.toLowerCase()}" data-schedule="${schedule.schedule_id}">
      <div class="countdown">${countdown}</div>
      <div class="schedule-meta">every ${schedule.interval_seconds}s · state ${schedule.state}</div>
      ${note}
      <div class="actions">${actions.join('')}</div>
    </div>`;
}

export function renderHistory(events: HistoryEvent[]): string {
  if (events.length === 0) return '<p class="empty">No events yet.</p>';
  const rows = events
    .map(
      (event) => `
      <li class="history-item kind-${escapeHtml(event.kind)}">
        <span class="when">${escapeHtml(event.occurred_at)}</span>
        <span class="kind">${escapeHtml(event.kind)}</span>
        <span class="summary">${escapeHtml(event.summary)}</span>
      </li>`,
    )
    .join('');
  return `<ul class="history">${rows}</ul>`;
}

export function renderContacts(contacts: Contact[]): string {
  if (contacts.length === 0) return '<p class="empty">No emergency contacts configured.</p>';
  const rows = contacts
    .map(
      (contact) => `
      <li class="contact">
        <span class="priority">#${contact.priority}</span>
        <span class="name">${escapeHtml(contact.name)}</span>
        <span class="email">${escapeHtml(contact.email)}</span>
      </li>`,
    )
    .join('');
  return `<ul class="contacts">${rows}</ul>`;
}
