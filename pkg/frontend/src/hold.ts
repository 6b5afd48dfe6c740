// Hold-to-activate guard for the SOS button: the request fires only after
// an uninterrupted 3-second press, so accidental taps do nothing.

export const SOS_HOLD_MS = 3000;

export class HoldTracker {
  private startedAt: number | null = null;

  constructor(private readonly holdMs: number = SOS_HOLD_MS) {}

  begin(nowMs: number): void {
    this.startedAt = nowMs;
  }

  cancel(): void {
    this.startedAt = null;
  }

  get active(): boolean {
    return this.startedAt !== null;
  }

  /** 0..1 fraction of the hold completed. */
  progress(nowMs: number): number {
    if (this.startedAt === null) return 0;
    return Math.min(1, (nowMs - this.startedAt) / this.holdMs);
  }

  /** True once the press has been held long enough; a release before that
   * (cancel) means no request is ever issued. */
  isComplete(nowMs: number): boolean {
    return this.startedAt !== null && nowMs - this.startedAt >= this.holdMs;
  }
}
