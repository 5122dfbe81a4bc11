/**
 * DOM rendering for the test page: a square scrollable area showing exactly
 * ten rows of shapes, a grey frame overlay centered on it, an instruction
 * panel above, and a start popup centered in the area. Rows hold three
 * shapes across the full width (colorblind-safe palette); the target row
 * shows three black stars in the unknown condition or a "LINE n" label in
 * the known condition.
 */

import { IssuedTrial } from "./api.js";
import { layoutForArea, TrialLayout } from "./geometry.js";

// Okabe-Ito palette, safe for common color-vision deficiencies.
const PALETTE = ["#E69F00", "#56B4E9", "#009E73", "#F0E442", "#0072B2", "#D55E00", "#CC79A7"];
const SHAPES = ["circle", "square", "triangle"] as const;

export interface PageElements {
  instruction: HTMLElement;
  area: HTMLElement;
  document: HTMLElement;
  frame: HTMLElement;
  popup: HTMLElement;
  popupButton: HTMLButtonElement;
  status: HTMLElement;
}

export function buildPage(root: HTMLElement): PageElements {
  root.innerHTML = `
    <div class="instruction" id="instruction"></div>
    <div class="area-wrap">
      <div class="scroll-area" id="scroll-area" tabindex="0">
        <div class="doc" id="doc"></div>
      </div>
      <div class="frame-overlay" id="frame"></div>
      <div class="start-popup hidden" id="popup">
        <button id="start-button">Start</button>
      </div>
    </div>
    <div class="status" id="status"></div>
  `;
  return {
    instruction: root.querySelector("#instruction")!,
    area: root.querySelector("#scroll-area")!,
    document: root.querySelector("#doc")!,
    frame: root.querySelector("#frame")!,
    popup: root.querySelector("#popup")!,
    popupButton: root.querySelector("#start-button")!,
    status: root.querySelector("#status")!,
  };
}

/** Square area fitting the window, below the instruction panel. */
export function areaSizePx(): number {
  const reserved = 140; // instruction panel + status line
  return Math.max(240, Math.min(window.innerWidth - 24, window.innerHeight - reserved));
}

function shapeElement(kind: (typeof SHAPES)[number], color: string, size: number): HTMLElement {
  const el = document.createElement("div");
  el.className = `shape shape-${kind}`;
  const s = Math.floor(size * 0.6);
  if (kind === "triangle") {
    el.style.borderLeftWidth = `${s / 2}px`;
    el.style.borderRightWidth = `${s / 2}px`;
    el.style.borderBottomWidth = `${s}px`;
    el.style.borderBottomColor = color;
  } else {
    el.style.width = `${s}px`;
    el.style.height = `${s}px`;
    el.style.background = color;
  }
  return el;
}

function starRow(size: number): HTMLElement[] {
  return [0, 1, 2].map(() => {
    const el = document.createElement("div");
    el.className = "target-star";
    el.textContent = "★";
    el.style.fontSize = `${Math.floor(size * 0.7)}px`;
    return el;
  });
}

export function renderTrialDocument(
  elements: PageElements,
  trial: IssuedTrial,
  areaPx: number,
): TrialLayout {
  const layout = layoutForArea(
    areaPx,
    trial.visibleRows,
    trial.frameHeightFactor,
    trial.targetRowIndex,
    trial.documentRows,
  );
  const { area, document: doc, frame, instruction } = elements;

  area.style.width = `${areaPx}px`;
  area.style.height = `${areaPx}px`;
  doc.innerHTML = "";
  doc.style.height = `${layout.rowCount * layout.lineHeightPx}px`;

  for (let row = 1; row <= layout.rowCount; row++) {
    const rowEl = document.createElement("div");
    rowEl.className = "row";
    rowEl.style.height = `${layout.lineHeightPx}px`;
    rowEl.dataset.row = String(row);
    if (row === trial.targetRowIndex) {
      rowEl.classList.add("target-row");
      if (trial.condition === "known") {
        const label = document.createElement("div");
        label.className = "target-label";
        label.textContent = `LINE ${trial.targetRowIndex}`;
        label.style.fontSize = `${Math.floor(layout.lineHeightPx * 0.5)}px`;
        rowEl.append(label);
      } else {
        rowEl.append(...starRow(layout.lineHeightPx));
      }
    } else {
      for (let col = 0; col < 3; col++) {
        const kind = SHAPES[(row + col) % SHAPES.length];
        const color = PALETTE[(row * 3 + col) % PALETTE.length];
        rowEl.append(shapeElement(kind, color, layout.lineHeightPx));
      }
    }
    doc.append(rowEl);
  }

  frame.style.top = `${layout.frameTopPx}px`;
  frame.style.height = `${layout.frameBottomPx - layout.frameTopPx}px`;
  frame.style.width = `${areaPx}px`;

  instruction.textContent =
    trial.condition === "known"
      ? `Scroll up to land LINE ${trial.targetRowIndex} in the grey area` +
        (trial.requireClick ? ", then click it" : "")
      : "Scroll up to land the stars in the grey area" +
        (trial.requireClick ? ", then click them" : "");

  return layout;
}

export function showPopup(elements: PageElements, areaPx: number): void {
  elements.popup.classList.remove("hidden");
  elements.popup.style.width = `${areaPx}px`;
}

export function hidePopup(elements: PageElements): void {
  elements.popup.classList.add("hidden");
}

export function deviceLabel(): string {
  return `${window.innerWidth}x${window.innerHeight}@${window.devicePixelRatio} ${navigator.userAgent}`;
}
