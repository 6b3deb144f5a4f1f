/** Dwell tracking for one article view.
 *
 * Rules (thresholds are client config, mirroring the service defaults):
 *   - closing before `skipMs` of visible time emits one `skipped` signal
 *   - `readLongMs` of *continuous* visible time emits one `readLong` signal
 *   - anything in between emits nothing beyond the initial `opened`
 */

export interface DwellConfig {
  skipMs: number;
  readLongMs: number;
}

export const DEFAULT_DWELL: DwellConfig = { skipMs: 5000, readLongMs: 30000 };

export type DwellSignal = "readLong" | "skipped";

type Timers = {
  setTimeout: (fn: () => void, ms: number) => ReturnType<typeof setTimeout>;
  clearTimeout: (id: ReturnType<typeof setTimeout>) => void;
  now: () => number;
};

const realTimers: Timers = {
  setTimeout: (fn, ms) => setTimeout(fn, ms),
  clearTimeout: (id) => clearTimeout(id),
  now: () => Date.now(),
};

export class DwellTracker {
  private openedAt: number | null = null;
  private visibleSince: number | null = null;
  private accumulatedVisible = 0;
  private readLongFired = false;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private closed = false;

  constructor(
    private readonly emit: (signal: DwellSignal) => void,
    private readonly config: DwellConfig = DEFAULT_DWELL,
    private readonly timers: Timers = realTimers,
  ) {}

  open(): void {
    if (this.openedAt !== null) return;
    this.openedAt = this.timers.now();
    this.show();
  }

  /** The view became visible again (e.g. the tab regained focus).
   * Continuous visible time restarts from zero. */
  show(): void {
    if (this.closed || this.readLongFired || this.visibleSince !== null) return;
    this.visibleSince = this.timers.now();
    this.timer = this.timers.setTimeout(() => {
      this.readLongFired = true;
      this.timer = null;
      this.emit("readLong");
    }, this.config.readLongMs);
  }

  hide(): void {
    if (this.visibleSince === null) return;
    this.accumulatedVisible += this.timers.now() - this.visibleSince;
    this.visibleSince = null;
    if (this.timer !== null) {
      this.timers.clearTimeout(this.timer);
      this.timer = null;
    }
  }

  close(): void {
    if (this.closed || this.openedAt === null) return;
    this.hide();
    this.closed = true;
    if (!this.readLongFired && this.accumulatedVisible < this.config.skipMs) {
      this.emit("skipped");
    }
  }
}
