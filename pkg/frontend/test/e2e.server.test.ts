/**
 * End-to-end contract test against the real trial server: a scripted
 * "browser" runs whole trials through the client-side geometry, recorder,
 * and metrics code, submits over HTTP, and requires the server's
 * recomputation to agree exactly (mismatch === false) on every trial, across
 * both conditions and three frame heights, including overshoot corrections
 * and mid-trace rests.
 */

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, IssuedTrial } from "../src/api.js";
import {
  computeTargetBand,
  layoutForArea,
  maxScrollOffset,
  TrialLayout,
} from "../src/geometry.js";
import { TraceEvent } from "../src/metrics.js";
import { TrialRecorder } from "../src/recorder.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | undefined;

async function waitForHealth(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${BASE}/api/health`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("server did not become healthy");
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "scrollbench-e2e-"));
  const configPath = join(dir, "study.json");
  // 2 conditions x 3 frame heights x 4 distances = 24 trials in one block
  writeFileSync(
    configPath,
    JSON.stringify({
      techniques: ["flick-phone"],
      distances: [8, 30, 70, 99],
      frameFactors: [1.0, 2.0, 3.0],
      quiescenceMs: 66,
      epsilonPx: 2.0,
      perParticipantTechniques: 1,
      participants: 1,
      requireClick: false,
      seed: 1,
      lineHeightPx: 60.0,
      visibleRows: 10,
      documentRows: 104,
    }),
  );
  server = spawn(
    "python3",
    [
      "-m", "scrollbench.cli", "serve",
      "--config", configPath,
      "--port", String(PORT),
      "--data-dir", join(dir, "data"),
    ],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stderr?.on("data", () => undefined);
  await waitForHealth();
}, 40_000);

afterAll(() => {
  server?.kill("SIGTERM");
});

/**
 * Prescribed scroll path for one issued trial: constant-velocity sweeps at
 * the event cadence. Every third trial overshoots past the band top and
 * corrects back; every fourth rests below the band mid-way (longer than the
 * quiescence window) before continuing, which must not end the trial.
 */
function scriptedPath(
  trial: IssuedTrial,
  layout: TrialLayout,
  band: readonly [number, number],
): TraceEvent[] {
  const [sMin, sMax] = band;
  const center = (sMin + sMax) / 2;
  const cadence = 16;
  const events: Array<[number, number]> = [];
  let t = 250; // reaction delay
  let pos = 0;

  const sweep = (to: number, velocityPxPerMs: number) => {
    const from = pos;
    const duration = Math.max(cadence, Math.abs(to - from) / velocityPxPerMs);
    const steps = Math.max(1, Math.floor(duration / cadence));
    for (let k = 1; k <= steps; k++) {
      events.push([t + k * cadence, from + ((to - from) * k) / steps]);
    }
    // land exactly on the target offset
    events[events.length - 1] = [t + steps * cadence, to];
    t += steps * cadence;
    pos = to;
  };

  if (trial.seq % 4 === 0) {
    sweep(Math.max(0, sMin - 3 * layout.lineHeightPx), 2.2);
    t += 180; // rest below the band, longer than quiescence
  }
  if (trial.seq % 3 === 0) {
    // overshoot; the browser clamps scrollTop at the document end
    sweep(Math.min(sMax + 2.5 * layout.lineHeightPx, maxScrollOffset(layout)), 2.2);
    t += 120;
    sweep(center, 0.8); // correction back into the band
  } else {
    sweep(center, 2.2);
  }
  return events;
}

/** Feed a planned path as a live stream, honoring the recorder's verdicts. */
function runScripted(
  recorder: TrialRecorder,
  path: readonly TraceEvent[],
): void {
  recorder.arm();
  for (let i = 0; i < path.length; i++) {
    recorder.feed(path[i][0], path[i][1]);
    const horizon =
      i + 1 < path.length ? path[i + 1][0] : path[i][0] + 10_000;
    if (horizon > path[i][0] + 66 && recorder.checkComplete(horizon)) {
      return; // live completion mid-path: stop scrolling, like a user would
    }
  }
  const last = path[path.length - 1][0];
  if (!recorder.checkComplete(last + 10_000)) {
    throw new Error("scripted path failed to complete its trial");
  }
}

describe("scripted end-to-end block", () => {
  it(
    "completes 24 trials across both conditions and 3 frame heights with zero mismatches",
    async () => {
      const api = new ApiClient(BASE);
      const session = await api.createSession("e2e-bot", "flick-phone", "vitest harness", 99);
      expect(session.trialCount).toBe(24);

      const seen = { conditions: new Set<string>(), heights: new Set<number>() };
      let accepted = 0;
      for (;;) {
        const issued = await api.nextTrial(session.sessionId);
        if ("done" in issued && issued.done) break;
        const trial = issued as IssuedTrial;

        const areaPx = trial.suggestedLineHeightPx * trial.visibleRows;
        const layout = layoutForArea(
          areaPx,
          trial.visibleRows,
          trial.frameHeightFactor,
          trial.targetRowIndex,
          trial.documentRows,
        );
        const band = computeTargetBand(layout);
        const recorder = new TrialRecorder(band, trial.quiescenceMs, trial.epsilonPx);
        runScripted(recorder, scriptedPath(trial, layout, band));

        const metrics = recorder.metrics();
        expect(metrics.completed).toBe(true);
        const result = await api.submitTrial(
          session.sessionId,
          trial.seq,
          {
            lineHeightPx: layout.lineHeightPx,
            viewportHeightPx: layout.viewportHeightPx,
            frameTopPx: layout.frameTopPx,
            frameBottomPx: layout.frameBottomPx,
          },
          recorder.trace(),
          trial.quiescenceMs,
          metrics,
        );
        expect(result.accepted).toBe(true);
        expect(result.mismatch).toBe(false);
        expect(result.serverMetrics).toEqual(metrics);
        accepted += 1;
        seen.conditions.add(trial.condition);
        seen.heights.add(trial.frameHeightFactor);
      }
      expect(accepted).toBe(24);
      expect(seen.conditions).toEqual(new Set(["unknown", "known"]));
      expect(seen.heights.size).toBe(3);
    },
    60_000,
  );
});
