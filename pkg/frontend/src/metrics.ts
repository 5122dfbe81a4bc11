/**
 * Client-side trial metrics. This mirrors the server's algorithm operation
 * for operation: a trial completes at the first event resting inside the
 * acceptance band for the full quiescence window; switchbacks are direction
 * reversals under a hysteresis threshold starting in the task direction from
 * offset 0; overshoot is the peak excess past the band top, with excursions
 * within the hysteresis reported as 0. The server recomputes everything from
 * the submitted trace, so any divergence here surfaces as mismatch=true.
 */

export type TraceEvent = readonly [t: number, s: number];

export interface TrialMetrics {
  movementTimeMs: number;
  switchbacks: number;
  maxOvershootPx: number;
  completed: boolean;
  endEventIndex: number | null;
  firstOvershootAtMs: number | null;
}

/**
 * Smallest index whose event rests in the band: in [sMin, sMax], and with no
 * follow-up event within (t, t + quiescenceMs]. `nowMs` bounds the live
 * check on the final event; pass Infinity for a finished trace.
 */
export function detectTrialEnd(
  events: readonly TraceEvent[],
  band: readonly [number, number],
  quiescenceMs: number,
  nowMs: number = Infinity,
): number | null {
  const [sMin, sMax] = band;
  for (let i = 0; i < events.length; i++) {
    const [t, s] = events[i];
    if (s < sMin || s > sMax) continue;
    if (i + 1 < events.length) {
      if (events[i + 1][0] > t + quiescenceMs) return i;
    } else if (nowMs > t + quiescenceMs) {
      return i;
    }
  }
  return null;
}

/** Indices where a hysteresis reversal fires; positions[0] is the start offset. */
export function reversalIndices(positions: readonly number[], epsilonPx: number): number[] {
  const fired: number[] = [];
  if (positions.length === 0) return fired;
  let direction = 1;
  let extreme = positions[0];
  for (let k = 1; k < positions.length; k++) {
    const p = positions[k];
    if (direction > 0) {
      if (p > extreme) {
        extreme = p;
      } else if (extreme - p > epsilonPx) {
        fired.push(k);
        direction = -1;
        extreme = p;
      }
    } else {
      if (p < extreme) {
        extreme = p;
      } else if (p - extreme > epsilonPx) {
        fired.push(k);
        direction = 1;
        extreme = p;
      }
    }
  }
  return fired;
}

export function computeMetrics(
  events: readonly TraceEvent[],
  band: readonly [number, number],
  quiescenceMs: number,
  epsilonPx: number,
  startClickT = 0,
): TrialMetrics {
  const end = detectTrialEnd(events, band, quiescenceMs);
  const slice = end === null ? events : events.slice(0, end + 1);

  const movementTimeMs = slice.length ? slice[slice.length - 1][0] - startClickT : 0;

  const positions = [0, ...slice.map((ev) => ev[1])];
  const switchbacks = reversalIndices(positions, epsilonPx).length;

  let peak = 0;
  for (const p of positions) if (p > peak) peak = p;
  const excess = peak - band[1];
  const maxOvershootPx = excess > epsilonPx ? excess : 0;

  let firstOvershootAtMs: number | null = null;
  for (const [t, s] of slice) {
    if (s > band[1]) {
      firstOvershootAtMs = t - startClickT;
      break;
    }
  }

  return {
    movementTimeMs,
    switchbacks,
    maxOvershootPx,
    completed: end !== null,
    endEventIndex: end,
    firstOvershootAtMs,
  };
}
