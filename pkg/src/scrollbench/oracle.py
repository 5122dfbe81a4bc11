"""Exhaustive re-derivation of trial metrics, used as ground truth in tests.

Everything here is recomputed by full scans with no carried state: end
detection checks every event against every other event's timestamp, and the
reversal scan re-derives the running extreme from the whole current segment
instead of tracking it incrementally. Slower than the engine by design; the
two must agree exactly on every field.
"""

from __future__ import annotations

import numpy as np

from .geometry import TrialGeometry, compute_target_band
from .metrics import DEFAULT_EPSILON_PX, TrialMetrics
from .trace import TrialTrace


def _oracle_end_index(trace: TrialTrace, s_min: float, s_max: float) -> int | None:
    times = [ev.t for ev in trace.events]
    for i, ev in enumerate(trace.events):
        if not s_min <= ev.s <= s_max:
            continue
        window_open = ev.t
        window_close = ev.t + trace.quiescence_ms
        busy = any(window_open < t <= window_close for t in times)
        if not busy:
            return i
    return None


def _oracle_reversal_indices(positions: np.ndarray, epsilon_px: float) -> list[int]:
    """Reversal indices by repeated whole-segment scans from each turning point."""
    reversals: list[int] = []
    direction = 1
    seg_start = 0
    n = len(positions)
    while True:
        fired = None
        if seg_start + 1 < n:
            seg = positions[seg_start:]
            if direction > 0:
                extremes = np.maximum.accumulate(seg)
            else:
                extremes = np.minimum.accumulate(seg)
            slack = (extremes - seg) * direction
            hits = np.nonzero(slack > epsilon_px)[0]
            if hits.size:
                fired = seg_start + int(hits[0])
        if fired is None:
            return reversals
        reversals.append(fired)
        seg_start = fired
        direction = -direction


def replay_oracle(
    trace: TrialTrace,
    g: TrialGeometry,
    *,
    epsilon_px: float = DEFAULT_EPSILON_PX,
) -> TrialMetrics:
    """Recompute TrialMetrics by exhaustive scan; must equal compute_metrics."""
    s_min, s_max = compute_target_band(g)
    end = _oracle_end_index(trace, s_min, s_max)
    events = list(trace.events) if end is None else list(trace.events[: end + 1])

    positions = np.array([0.0] + [ev.s for ev in events], dtype=float)
    reversal_count = len(_oracle_reversal_indices(positions, epsilon_px))

    peak = float(positions.max()) if positions.size else 0.0
    excess = peak - s_max
    overshoot = excess if excess > epsilon_px else 0.0

    over_events = [ev.t for ev in events if ev.s > s_max]
    first_overshoot = (over_events[0] - trace.start_click_t) if over_events else None

    movement_time = (events[-1].t - trace.start_click_t) if events else 0

    return TrialMetrics(
        movement_time_ms=movement_time,
        switchbacks=reversal_count,
        max_overshoot_px=overshoot,
        completed=end is not None,
        end_event_index=end,
        first_overshoot_at_ms=first_overshoot,
    )
