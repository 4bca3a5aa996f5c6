// Rate limiter for slider scrubbing: fires at most once per interval,
// always ending with the most recent value (trailing edge, latest wins).

export type Task = () => void;

export class RateLimiter {
  private lastFired = -Infinity;
  private timer: ReturnType<typeof setTimeout> | undefined;
  private pending: Task | undefined;

  constructor(private intervalMs: number) {}

  schedule(task: Task): void {
    const now = Date.now();
    if (now - this.lastFired >= this.intervalMs && this.timer === undefined) {
      this.lastFired = now;
      task();
      return;
    }
    this.pending = task;
    if (this.timer === undefined) {
      const wait = Math.max(0, this.lastFired + this.intervalMs - now);
      this.timer = setTimeout(() => this.flush(), wait);
    }
  }

  private flush(): void {
    this.timer = undefined;
    const task = this.pending;
    this.pending = undefined;
    if (task) {
      this.lastFired = Date.now();
      task();
    }
  }

  cancel(): void {
    if (this.timer !== undefined) clearTimeout(this.timer);
    this.timer = undefined;
    this.pending = undefined;
  }
}
