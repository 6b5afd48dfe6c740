// Retry queue for check-ins attempted while offline. Lives in memory only;
// the next poll cycle (or explicit retry) flushes it.

export class CheckInQueue {
  private readonly pending = new Set<string>();

  enqueue(scheduleId: string): void {
    this.pending.add(scheduleId);
  }

  get size(): number {
    return this.pending.size;
  }

  has(scheduleId: string): boolean {
    return this.pending.has(scheduleId);
  }

  /** Attempt every queued check-in; failures stay queued for next time. */
  async flush(attempt: (scheduleId: string) => Promise<unknown>): Promise<{ ok: string[]; failed: string[] }> {
    const ok: string[] = [];
    const failed: string[] = [];
    for (const scheduleId of [...this.pending]) {
      try {
        await attempt(scheduleId);
        this.pending.delete(scheduleId);
        ok.push(scheduleId);
      } catch {
        failed.push(scheduleId);
      }
    }
    return { ok, failed };
  }
}
