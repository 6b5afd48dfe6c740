// DOM wiring for the SafeSpace dashboard. All logic lives in the imported
// modules; this file only connects them to the page. Chat text and
// questionnaire answers stay in memory; only the bearer token is kept in
// sessionStorage so a reload within the session keeps you signed in.

import { ApiError, SafeSpaceClient } from './api.js';
import { CountdownTracker } from './countdown.js';
import { captureLocation } from './geo.js';
import { HoldTracker, SOS_HOLD_MS } from './hold.js';
import { CheckInQueue } from './queue.js';
import {
  renderAssessment,
  renderContacts,
  renderHistory,
  renderReport,
  renderScheduleCard,
  escapeHtml,
} from './render.js';
import type { Contact, Schedule } from './types.js';
import { canAddContact, textByteLength, textTooLarge, validateContactList, MAX_TEXT_BYTES } from './validate.js';
import { WizardState } from './wizard.js';

const POLL_MS = 10_000;
const QUESTIONNAIRE_ID = 'relationship_v1';

const $ = <T extends HTMLElement>(selector: string): T => {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
};

let client: SafeSpaceClient | null = null;
let schedules: Schedule[] = [];
const countdowns = new CountdownTracker();
const checkInQueue = new CheckInQueue();
let wizard: WizardState | null = null;

function banner(message: string, kind: 'info' | 'error' = 'info'): void {
  const el = $('#banner');
  el.textContent = message;
  el.className = `banner ${kind}`;
  el.removeAttribute('hidden');
  setTimeout(() => el.setAttribute('hidden', ''), 6000);
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}

// --- session ---------------------------------------------------------------

function connect(): void {
  const token = ($('#token') as HTMLInputElement).value.trim();
  if (!token) {
    banner('Paste your bearer token first.', 'error');
    return;
  }
  client = new SafeSpaceClient({ baseUrl: '', token });
  client
    .listSchedules()
    .then(() => {
      sessionStorage.setItem('safespace_token', token);
      $('#login').setAttribute('hidden', '');
      $('#app').removeAttribute('hidden');
      void refreshSchedules();
      void refreshHistory();
      void refreshContacts();
      void loadQuestionnaire();
    })
    .catch((err) => banner(describeError(err), 'error'));
}

// --- check-in screen ---------------------------------------------------------

async function refreshSchedules(): Promise<void> {
  if (!client) return;
  try {
    schedules = await client.listSchedules();
    countdowns.resync(schedules);
    if (checkInQueue.size > 0) {
      const { ok } = await checkInQueue.flush((id) => client!.checkIn(id));
      if (ok.length > 0) banner(`Queued check-in${ok.length > 1 ? 's' : ''} delivered.`);
    }
  } catch (err) {
    banner(describeError(err), 'error');
  }
  paintSchedules();
}

function paintSchedules(): void {
  const now = Date.now();
  const cards = schedules.map((s) => renderScheduleCard(s, countdowns.remaining(s.schedule_id, now)));
  $('#schedules').innerHTML = cards.join('') || '<p class="empty">No schedules yet.</p>';
  if (checkInQueue.size > 0) {
    $('#schedules').insertAdjacentHTML(
      'afterbegin',
      `<p class="warn">Offline: ${checkInQueue.size} check-in(s) queued, retrying.</p>`,
    );
  }
}

async function scheduleAction(action: string, scheduleId: string): Promise<void> {
  if (!client) return;
  if (action === 'checkin') {
    // Optimistic: reset the countdown immediately, roll back on failure.
    const schedule = schedules.find((s) => s.schedule_id === scheduleId);
    const previousDeadline = schedule?.next_deadline;
    if (schedule) {
      schedule.next_deadline = new Date(Date.now() + schedule.interval_seconds * 1000).toISOString();
      schedule.state = 'Active';
      countdowns.resyncOne(schedule);
      paintSchedules();
    }
    try {
      const updated = await client.checkIn(scheduleId);
      schedules = schedules.map((s) => (s.schedule_id === scheduleId ? updated : s));
      countdowns.resyncOne(updated);
    } catch (err) {
      if (schedule && previousDeadline) {
        schedule.next_deadline = previousDeadline;
        countdowns.resyncOne(schedule);
      }
      if (err instanceof ApiError) {
        banner(describeError(err), 'error');
      } else {
        checkInQueue.enqueue(scheduleId);
        banner('Offline: check-in queued, will retry automatically.', 'error');
      }
    }
    paintSchedules();
    return;
  }
  try {
    if (action === 'pause') await client.pauseSchedule(scheduleId);
    else if (action === 'resume') await client.resumeSchedule(scheduleId);
    else if (action === 'disarm') await client.disarmSchedule(scheduleId);
  } catch (err) {
    banner(describeError(err), 'error');
  }
  void refreshSchedules();
}

async function createSchedule(): Promise<void> {
  if (!client) return;
  const input = $('#interval') as HTMLInputElement;
  const interval = Number(input.value);
  try {
    await client.createSchedule(interval);
    input.value = '';
    void refreshSchedules();
  } catch (err) {
    banner(describeError(err), 'error');
  }
}

// --- SOS ----------------------------------------------------------------------

function wireSosButton(): void {
  const button = $('#sos-button');
  const progress = $('#sos-progress') as HTMLElement;
  const hold = new HoldTracker(SOS_HOLD_MS);
  let timer: number | undefined;

  const stop = (fired: boolean) => {
    hold.cancel();
    if (timer !== undefined) window.clearInterval(timer);
    progress.style.width = '0%';
    if (!fired) $('#sos-status').textContent = 'Hold for 3 seconds to send.';
  };

  button.addEventListener('pointerdown', (event) => {
    event.preventDefault();
    hold.begin(Date.now());
    $('#sos-status').textContent = 'Keep holding…';
    timer = window.setInterval(() => {
      const now = Date.now();
      progress.style.width = `${hold.progress(now) * 100}%`;
      if (hold.isComplete(now)) {
        stop(true);
        void fireSos();
      }
    }, 50);
  });
  button.addEventListener('pointerup', () => stop(false));
  button.addEventListener('pointerleave', () => stop(false));
}

async function fireSos(): Promise<void> {
  if (!client) return;
  $('#sos-status').textContent = 'Sending SOS…';
  const note = ($('#sos-note') as HTMLInputElement).value.trim();
  const location = await captureLocation(navigator.geolocation);
  const body: { lat?: number; lon?: number; accuracy_m?: number; note?: string } = {};
  if (location) {
    body.lat = location.lat;
    body.lon = location.lon;
    if (location.accuracy_m !== undefined) body.accuracy_m = location.accuracy_m;
  }
  if (note) body.note = note;
  try {
    const alert = await client.sos(body);
    $('#sos-status').textContent = location
      ? `SOS sent with your location (alert ${alert.alert_id.slice(0, 8)}…).`
      : `SOS sent; location unavailable (permission denied or no fix). Alert ${alert.alert_id.slice(0, 8)}…`;
    void refreshHistory();
  } catch (err) {
    $('#sos-status').textContent = `SOS failed: ${describeError(err)}`;
  }
}

// --- analyze -------------------------------------------------------------------

async function analyzeText(): Promise<void> {
  if (!client) return;
  const text = ($('#analyze-input') as HTMLTextAreaElement).value;
  if (textTooLarge(text)) {
    banner(`Text is ${textByteLength(text)} bytes; the limit is ${MAX_TEXT_BYTES}.`, 'error');
    return;
  }
  try {
    const report = await client.analyzeText(text);
    $('#analyze-result').innerHTML = renderReport(report, text);
  } catch (err) {
    $('#analyze-result').innerHTML = `<p class="warn">${escapeHtml(describeError(err))}</p>`;
  }
}

async function analyzeImage(file: File): Promise<void> {
  if (!client) return;
  try {
    const report = await client.analyzeImage(file, file.name);
    // the extracted text is not echoed back; highlight spans on matched text
    $('#analyze-result').innerHTML = renderReport(report, report.spans.map((s) => s.matched).join(' … '));
  } catch (err) {
    $('#analyze-result').innerHTML = `<p class="warn">${escapeHtml(describeError(err))}</p>`;
  }
}

// --- questionnaire ----------------------------------------------------------------

async function loadQuestionnaire(): Promise<void> {
  if (!client) return;
  try {
    const definition = await client.getQuestionnaire(QUESTIONNAIRE_ID);
    wizard = new WizardState(definition);
    paintWizard();
  } catch (err) {
    $('#wizard').innerHTML = `<p class="warn">${escapeHtml(describeError(err))}</p>`;
  }
}

function paintWizard(): void {
  if (!wizard) return;
  const question = wizard.current();
  const selected = wizard.answerFor(question.id);
  const options = question.options
    .map(
      (option, index) => `
      <label class="option">
        <input type="radio" name="option" value="${index}" ${selected === index ? 'checked' : ''} />
        ${escapeHtml(option.label)}
      </label>`,
    )
    .join('');
  $('#wizard').innerHTML = `
    <div class="progressbar"><div style="width:${(wizard.progress() * 100).toFixed(0)}%"></div></div>
    <p class="step-count">Question ${wizard.stepIndex + 1} of ${wizard.stepCount}</p>
    <p class="prompt">${escapeHtml(question.prompt)}</p>
    <div class="options">${options}</div>
    <div class="actions">
      <button id="wizard-back" ${wizard.canBack() ? '' : 'disabled'}>Back</button>
      <button id="wizard-next" ${wizard.canNext() ? '' : 'disabled'}>Next</button>
      <button id="wizard-submit" class="primary" ${wizard.canSubmit() ? '' : 'disabled'}>Submit</button>
    </div>`;
  document.querySelectorAll<HTMLInputElement>('#wizard input[name="option"]').forEach((input) => {
    input.addEventListener('change', () => {
      wizard!.select(Number(input.value));
      paintWizard();
    });
  });
  $('#wizard-back').addEventListener('click', () => {
    wizard!.back();
    paintWizard();
  });
  $('#wizard-next').addEventListener('click', () => {
    wizard!.next();
    paintWizard();
  });
  $('#wizard-submit').addEventListener('click', () => void submitWizard());
}

async function submitWizard(): Promise<void> {
  if (!client || !wizard || !wizard.canSubmit()) return;
  try {
    const assessment = await client.submitQuestionnaire(QUESTIONNAIRE_ID, wizard.toAnswers());
    $('#wizard').innerHTML =
      renderAssessment(assessment) + '<button id="wizard-restart">Take it again</button>';
    $('#wizard-restart').addEventListener('click', () => void loadQuestionnaire());
    void refreshHistory();
  } catch (err) {
    banner(describeError(err), 'error');
  }
}

// --- history + contacts --------------------------------------------------------------

async function refreshHistory(): Promise<void> {
  if (!client) return;
  try {
    const page = await client.getHistory({ limit: 50 });
    $('#history').innerHTML = renderHistory(page.events);
  } catch (err) {
    banner(describeError(err), 'error');
  }
}

let editedContacts: Contact[] = [];

async function refreshContacts(): Promise<void> {
  if (!client) return;
  try {
    editedContacts = await client.getContacts();
    paintContacts();
  } catch (err) {
    banner(describeError(err), 'error');
  }
}

function paintContacts(): void {
  $('#contacts-list').innerHTML = renderContacts(editedContacts);
  const issues = validateContactList(editedContacts);
  $('#contacts-issues').innerHTML = issues
    .map((issue) => `<p class="warn">${issue.index >= 0 ? `contact ${issue.index + 1}: ` : ''}${escapeHtml(issue.message)}</p>`)
    .join('');
  ($('#contact-add') as HTMLButtonElement).disabled = !canAddContact(editedContacts);
  ($('#contacts-save') as HTMLButtonElement).disabled = issues.length > 0;
}

function addContact(): void {
  const name = ($('#contact-name') as HTMLInputElement).value.trim();
  const email = ($('#contact-email') as HTMLInputElement).value.trim();
  if (!name || !email) {
    banner('Name and email are required.', 'error');
    return;
  }
  const nextPriority = editedContacts.reduce((max, c) => Math.max(max, c.priority), 0) + 1;
  editedContacts = [...editedContacts, { name, email, priority: nextPriority }];
  ($('#contact-name') as HTMLInputElement).value = '';
  ($('#contact-email') as HTMLInputElement).value = '';
  paintContacts();
}

async function saveContacts(): Promise<void> {
  if (!client) return;
  try {
    editedContacts = await client.putContacts(editedContacts);
    paintContacts();
    banner('Contacts saved.');
  } catch (err) {
    banner(describeError(err), 'error');
  }
}

// --- boot ------------------------------------------------------------------------------

function wireTabs(): void {
  document.querySelectorAll<HTMLButtonElement>('nav [data-tab]').forEach((button) => {
    button.addEventListener('click', () => {
      document.querySelectorAll('nav [data-tab]').forEach((b) => b.classList.remove('active'));
      button.classList.add('active');
      document.querySelectorAll<HTMLElement>('main section').forEach((section) => {
        section.hidden = section.id !== `tab-${button.dataset.tab}`;
      });
    });
  });
}

function boot(): void {
  wireTabs();
  wireSosButton();
  $('#connect').addEventListener('click', connect);
  $('#create-schedule').addEventListener('click', () => void createSchedule());
  $('#analyze-run').addEventListener('click', () => void analyzeText());
  $('#schedules').addEventListener('click', (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>('[data-action]');
    if (target) void scheduleAction(target.dataset.action!, target.dataset.id!);
  });
  ($('#analyze-file') as HTMLInputElement).addEventListener('change', (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) void analyzeImage(file);
  });
  $('#contact-add').addEventListener('click', addContact);
  $('#contacts-save').addEventListener('click', () => void saveContacts());
  const saved = sessionStorage.getItem('safespace_token');
  if (saved) {
    ($('#token') as HTMLInputElement).value = saved;
    connect();
  }
  window.setInterval(() => {
    void refreshSchedules();
  }, POLL_MS);
  window.setInterval(() => paintSchedules(), 1000); // tick countdowns between polls
}

document.addEventListener('DOMContentLoaded', boot);
