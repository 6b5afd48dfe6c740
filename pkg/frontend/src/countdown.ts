// Cosmetic countdown derived from the server's next_deadline. The deadline
// is re-read from every server response; the client clock only interpolates
// between polls and is never trusted for alert decisions.

import type { Schedule } from './types.js';

export function remainingSeconds(nextDeadlineIso: string, nowMs: number): number {
  return (Date.parse(nextDeadlineIso) - nowMs) / 1000;
}

export function formatRemaining(seconds: number): string {
  if (seconds <= 0) return 'overdue';
  const total = Math.floor(seconds);
  const days = Math.floor(total / 86400);
  const hours = Math.floor((total % 86400) / 3600);
  const minutes = Math.floor((total % 3600) / 60);
  const secs = total % 60;
  const pad = (n: number) => String(n).padStart(2, '0');
  const clock = `${pad(hours)}:${pad(minutes)}:${pad(secs)}`;
  return days > 0 ? `${days}d ${clock}` : clock;
}

/** Tracks per-schedule deadlines, resynced from each server response. */
export class CountdownTracker {
  private deadlines = new Map<string, string>();

  resync(schedules: Schedule[]): void {
    this.deadlines = new Map(schedules.map((s) => [s.schedule_id, s.next_deadline]));
  }

  resyncOne(schedule: Schedule): void {
    this.deadlines.set(schedule.schedule_id, schedule.next_deadline);
  }

  remaining(scheduleId: string, nowMs: number): number | null {
    const deadline = this.deadlines.get(scheduleId);
    return deadline === undefined ? null : remainingSeconds(deadline, nowMs);
  }
}
