// After a stretch with no student activity the client asks the server for
// a hint on its own, through the same endpoint a manual request uses. The
// scheduler is injectable so tests can drive time by hand.

export interface Scheduler {
  set(fn: () => void, ms: number): unknown;
  clear(handle: unknown): void;
}

const realScheduler: Scheduler = {
  set: (fn, ms) => setTimeout(fn, ms),
  clear: (handle) => clearTimeout(handle as Parameters<typeof clearTimeout>[0]),
};

export const DEFAULT_TIMEOUT_MS = 120_000;

export class InactivityTimer {
  private readonly timeoutMs: number;
  private readonly onIdle: () => void;
  private readonly scheduler: Scheduler;
  private handle: unknown = null;
  private running = false;

  constructor(
    onIdle: () => void,
    timeoutMs: number = DEFAULT_TIMEOUT_MS,
    scheduler: Scheduler = realScheduler,
  ) {
    this.onIdle = onIdle;
    this.timeoutMs = timeoutMs;
    this.scheduler = scheduler;
  }

  start(): void {
    this.running = true;
    this.touch();
  }

  // Any student activity resets the countdown.
  touch(): void {
    if (!this.running) return;
    this.cancel();
    this.handle = this.scheduler.set(() => {
      this.handle = null;
      this.onIdle();
      // One idle hint per quiet stretch; the next countdown starts only
      // after the student does something again.
    }, this.timeoutMs);
  }

  stop(): void {
    this.running = false;
    this.cancel();
  }

  private cancel(): void {
    if (this.handle !== null) {
      this.scheduler.clear(this.handle);
      this.handle = null;
    }
  }
}
