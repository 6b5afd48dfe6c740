// Wire types for the SafeSpace JSON API. Field names mirror the server
// contract exactly (snake_case, RFC 3339 UTC timestamps).

export type Verdict = 'Clean' | 'Caution' | 'Abusive';

export type ToxicityCategory =
  | 'TOXICITY'
  | 'SEVERE_TOXICITY'
  | 'INSULT'
  | 'THREAT'
  | 'IDENTITY_ATTACK'
  | 'PROFANITY';

export interface FlaggedSpan {
  start: number; // byte offset into the UTF-8 encoding of the analyzed text
  length: number;
  category: ToxicityCategory;
  matched: string;
}

export interface ToxicityReport {
  scores: Record<ToxicityCategory, number>;
  spans: FlaggedSpan[];
  verdict: Verdict;
  source: 'DirectText' | 'Screenshot';
  analyzed_at: string;
  scorer_id: string;
}

export type ScheduleState = 'Active' | 'Paused' | 'Triggered' | 'Disarmed';

export interface Schedule {
  schedule_id: string;
  user_id: string;
  interval_seconds: number;
  state: ScheduleState;
  last_check_in: string;
  next_deadline: string;
  created_at: string;
}

export interface GeoLocationPayload {
  latitude: number;
  longitude: number;
  captured_at: string;
  accuracy_m?: number;
}

export interface Alert {
  alert_id: string;
  kind: 'MissedCheckIn' | 'Sos';
  user_id: string;
  location: GeoLocationPayload | null;
  message: string;
  created_at: string;
  status: 'Pending' | 'Queued' | 'Sent' | 'Failed';
}

export interface Contact {
  contact_id?: string;
  name: string;
  email: string;
  priority: number;
}

export interface QuestionOption {
  label: string;
  score: number;
}

export interface Question {
  id: string;
  prompt: string;
  dimension: 'Communication' | 'Trust' | 'EmotionalWellBeing';
  weight: number;
  reverse: boolean;
  options: QuestionOption[];
}

export interface QuestionnaireDef {
  id: string;
  version: number;
  questions: Question[];
}

export interface Assessment {
  positivity: number;
  category: 'Healthy' | 'NeedsReflection' | 'Unhealthy';
  dimensions: Record<string, number>;
  feedback: string;
  scored_at: string;
}

export interface HistoryEvent {
  event_id: string;
  user_id: string;
  kind: string;
  summary: string;
  occurred_at: string;
}

export interface HistoryPage {
  events: HistoryEvent[];
  total: number;
}

export interface Health {
  status: 'ok' | 'degraded';
  scheduler_tick_age_s: number;
  outbox_pending: number;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
