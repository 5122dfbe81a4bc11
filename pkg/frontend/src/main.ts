/**
 * Trial loop: create a session, then for each issued trial reset the
 * document to row 1, show the start popup, record scroll events from the
 * popup click until the quiescent in-band rest, submit, and advance.
 *
 * Focus and the pointer land inside the scroll area on every trial start so
 * wheel, touchpad, and arrow-key events route to it; the recorder is armed
 * only between start click and completion, which drops any scroll events
 * fired while the page resets (the reset itself scrolls back to the top).
 */

import { ApiClient, IssuedTrial } from "./api.js";
import { computeTargetBand, targetRectAtOffset } from "./geometry.js";
import { TrialRecorder } from "./recorder.js";
import {
  areaSizePx,
  buildPage,
  deviceLabel,
  hidePopup,
  renderTrialDocument,
  showPopup,
} from "./ui.js";

async function runTrial(
  api: ApiClient,
  elements: ReturnType<typeof buildPage>,
  sessionId: string,
  trial: IssuedTrial,
): Promise<boolean> {
  const areaPx = areaSizePx();
  const layout = renderTrialDocument(elements, trial, areaPx);
  const band = computeTargetBand(layout);
  const recorder = new TrialRecorder(band, trial.quiescenceMs, trial.epsilonPx);

  const area = elements.area;
  area.scrollTop = 0; // reset fires a scroll event; the recorder is not armed yet

  showPopup(elements, areaPx);
  await new Promise<void>((resolve) => {
    elements.popupButton.onclick = () => resolve();
  });
  hidePopup(elements);
  area.focus({ preventScroll: true });

  const startedAt = performance.now();
  let quiescenceTimer: number | undefined;
  let clickSatisfied = !trial.requireClick;

  const finished = new Promise<void>((resolve) => {
    const maybeFinish = () => {
      if (recorder.checkComplete(performance.now() - startedAt) && clickSatisfied) {
        resolve();
      }
    };
    const onScroll = () => {
      const accepted = recorder.feed(performance.now() - startedAt, area.scrollTop);
      if (!accepted) return;
      window.clearTimeout(quiescenceTimer);
      quiescenceTimer = window.setTimeout(maybeFinish, trial.quiescenceMs + 5);
    };
    area.addEventListener("scroll", onScroll);
    if (trial.requireClick) {
      area.addEventListener("click", (ev) => {
        const rect = targetRectAtOffset(layout, area.scrollTop);
        const offsetY = ev.clientY - area.getBoundingClientRect().top;
        if (offsetY >= rect.top && offsetY <= rect.bottom) {
          clickSatisfied = true;
          maybeFinish();
        }
      });
    }
    recorder.arm();
  });
  await finished;
  window.clearTimeout(quiescenceTimer);
  recorder.disarm();

  const metrics = recorder.metrics();
  elements.status.textContent =
    `trial ${trial.seq}: ${(metrics.movementTimeMs / 1000).toFixed(2)} s, ` +
    `${metrics.switchbacks} switchbacks, ` +
    `${metrics.maxOvershootPx.toFixed(0)} px max overshoot`;

  const result = await api.submitTrial(
    sessionId,
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
  if (result.mismatch) {
    console.warn("server metrics disagree with client", result.serverMetrics, metrics);
  }
  await new Promise((r) => setTimeout(r, 600)); // brief confirmation before the next popup
  return result.accepted;
}

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const api = new ApiClient("");
  const config = await api.config();

  const participantId =
    new URLSearchParams(window.location.search).get("participant") ??
    window.prompt("Participant id?", "p01") ??
    "p01";
  const technique =
    new URLSearchParams(window.location.search).get("technique") ??
    window.prompt(`Technique? (${config.techniques.join(", ")})`, config.techniques[0]) ??
    config.techniques[0];

  const elements = buildPage(root);
  const session = await api.createSession(participantId, technique, deviceLabel());
  elements.status.textContent = `session ${session.sessionId}: ${session.trialCount} trials`;

  for (;;) {
    const trial = await api.nextTrial(session.sessionId);
    if ("done" in trial && trial.done) break;
    await runTrial(api, elements, session.sessionId, trial as IssuedTrial);
  }
  elements.instruction.textContent = "All trials complete. Thank you!";
  elements.status.textContent = "";
}

start().catch((err) => {
  console.error(err);
  const root = document.getElementById("app");
  if (root) root.textContent = `Error: ${err}`;
});
