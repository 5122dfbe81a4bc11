/**
 * Trial layout in CSS pixels. The scroll offset `s` is scrollTop: how far the
 * document has moved up past the viewport top. The target row is entirely
 * inside the frame exactly when s lies in [sMin, sMax].
 */

export interface TrialLayout {
  lineHeightPx: number;
  rowCount: number;
  viewportHeightPx: number;
  frameTopPx: number;
  frameBottomPx: number;
  targetRowIndex: number; // 1-based
}

export function layoutForArea(
  areaHeightPx: number,
  visibleRows: number,
  frameHeightFactor: number,
  targetRowIndex: number,
  rowCount: number,
): TrialLayout {
  const lineHeightPx = areaHeightPx / visibleRows;
  const frameHeight = frameHeightFactor * lineHeightPx;
  const frameTopPx = (areaHeightPx - frameHeight) / 2;
  return {
    lineHeightPx,
    rowCount,
    viewportHeightPx: areaHeightPx,
    frameTopPx,
    frameBottomPx: frameTopPx + frameHeight,
    targetRowIndex,
  };
}

export function targetTopPx(layout: TrialLayout): number {
  return (layout.targetRowIndex - 1) * layout.lineHeightPx;
}

export function documentHeightPx(layout: TrialLayout): number {
  return layout.rowCount * layout.lineHeightPx;
}

export function maxScrollOffset(layout: TrialLayout): number {
  return Math.max(0, documentHeightPx(layout) - layout.viewportHeightPx);
}

/** [sMin, sMax]: offsets for which the target row sits entirely in the frame. */
export function computeTargetBand(layout: TrialLayout): [number, number] {
  const top = targetTopPx(layout);
  const sMin = top + layout.lineHeightPx - layout.frameBottomPx;
  const sMax = top - layout.frameTopPx;
  if (sMax < sMin) {
    throw new Error("empty acceptance band: frame shorter than target row");
  }
  if (sMax < 0 || sMin > maxScrollOffset(layout)) {
    throw new Error(`unreachable target row ${layout.targetRowIndex}`);
  }
  return [sMin, sMax];
}

/** Where the target row renders, in viewport coordinates, at offset s. */
export function targetRectAtOffset(
  layout: TrialLayout,
  s: number,
): { top: number; bottom: number } {
  const top = targetTopPx(layout) - s;
  return { top, bottom: top + layout.lineHeightPx };
}

/** Direct geometric containment; must agree with the band interval. */
export function targetInsideFrame(layout: TrialLayout, s: number): boolean {
  const rect = targetRectAtOffset(layout, s);
  return layout.frameTopPx <= rect.top && rect.bottom <= layout.frameBottomPx;
}
