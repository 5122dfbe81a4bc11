/** Typed client for the trial server's JSON API. */

import { TraceEvent, TrialMetrics } from "./metrics.js";

export interface StudyConfig {
  techniques: string[];
  distances: number[];
  frameFactors: number[];
  quiescenceMs: number;
  epsilonPx: number;
  requireClick: boolean;
  visibleRows: number;
  documentRows: number;
  lineHeightPx: number;
  [key: string]: unknown;
}

export interface IssuedTrial {
  done: false;
  seq: number;
  condition: "unknown" | "known";
  technique: string;
  frameHeightFactor: number;
  targetRowIndex: number;
  distanceGroup: string;
  requireClick: boolean;
  documentRows: number;
  visibleRows: number;
  suggestedLineHeightPx: number;
  quiescenceMs: number;
  epsilonPx: number;
}

export type TrialResponse = IssuedTrial | { done: true };

export interface SubmitResult {
  accepted: boolean;
  seq: number;
  serverMetrics: TrialMetrics;
  mismatch: boolean;
}

export interface GeometrySubmission {
  lineHeightPx: number;
  viewportHeightPx: number;
  frameTopPx: number;
  frameBottomPx: number;
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    const text = await response.text();
    throw new Error(`${response.status}: ${text}`);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  async config(): Promise<StudyConfig> {
    return asJson(await fetch(`${this.baseUrl}/api/config`));
  }

  async createSession(
    participantId: string,
    technique: string,
    deviceLabel: string,
    seed?: number,
  ): Promise<{ sessionId: string; trialCount: number }> {
    return asJson(
      await fetch(`${this.baseUrl}/api/sessions`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ participantId, technique, deviceLabel, seed }),
      }),
    );
  }

  async nextTrial(sessionId: string): Promise<TrialResponse> {
    return asJson(await fetch(`${this.baseUrl}/api/sessions/${sessionId}/trial`));
  }

  async submitTrial(
    sessionId: string,
    seq: number,
    geometry: GeometrySubmission,
    events: readonly TraceEvent[],
    quiescenceMs: number,
    clientMetrics: TrialMetrics,
  ): Promise<SubmitResult> {
    return asJson(
      await fetch(`${this.baseUrl}/api/sessions/${sessionId}/trials/${seq}`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({
          geometry,
          trace: { events, startClickT: 0, quiescenceMs },
          clientMetrics,
        }),
      }),
    );
  }
}
