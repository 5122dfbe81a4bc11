/**
 * Collects one trial's scroll samples and decides, live, when the trial is
 * over. Feeding is gated by arm()/disarm() so scroll events fired while the
 * page resets between trials can never leak into the next trace.
 */

import { computeMetrics, detectTrialEnd, TraceEvent, TrialMetrics } from "./metrics.js";

export class TrialRecorder {
  private events: [number, number][] = [];
  private armed = false;
  private frozenEnd: number | null = null;

  constructor(
    private readonly band: readonly [number, number],
    private readonly quiescenceMs: number,
    private readonly epsilonPx: number,
  ) {}

  arm(): void {
    this.armed = true;
  }

  disarm(): void {
    this.armed = false;
  }

  get isArmed(): boolean {
    return this.armed;
  }

  /**
   * Record one sample. Timestamps are integer milliseconds from the start
   * click; ties keep the first sample, regressions are dropped (a stale
   * event from before a reset cannot reorder the stream).
   */
  feed(t: number, s: number): boolean {
    if (!this.armed || this.frozenEnd !== null) return false;
    const ti = Math.round(t);
    const last = this.events[this.events.length - 1];
    if (last && ti <= last[0]) return false;
    this.events.push([ti, s]);
    return true;
  }

  /**
   * Live completion check: runs the full end-detection rule over the prefix
   * with `nowMs` closing the stream. Once complete, the end index freezes and
   * later events are refused.
   */
  checkComplete(nowMs: number): boolean {
    if (this.frozenEnd !== null) return true;
    const end = detectTrialEnd(this.events, this.band, this.quiescenceMs, Math.round(nowMs));
    if (end !== null) {
      this.frozenEnd = end;
      this.armed = false;
    }
    return this.frozenEnd !== null;
  }

  get lastEventAt(): number | null {
    return this.events.length ? this.events[this.events.length - 1][0] : null;
  }

  trace(): TraceEvent[] {
    return this.events.slice();
  }

  metrics(): TrialMetrics {
    return computeMetrics(this.events, this.band, this.quiescenceMs, this.epsilonPx);
  }
}
