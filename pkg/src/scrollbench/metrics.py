"""Per-trial movement time, switchbacks, and maximum overshoot.

A trial completes at the first event that rests inside the acceptance band:
the event's offset is in ``[s_min, s_max]`` and no further event arrives
within the quiescence window after it. Movement time is that event's
timestamp relative to the start click; the quiescence window itself is not
part of the measurement.

Switchbacks are direction reversals counted with a hysteresis threshold
``epsilon_px``: starting in the task direction (increasing ``s``, from offset
0), a reversal fires once the stream moves more than ``epsilon_px`` against
the current direction, measured from the extreme reached since the last
reversal. The same threshold suppresses sub-jitter band exits: an excursion
past ``s_max`` is reported as overshoot only when it exceeds ``epsilon_px``,
which keeps the pair of accuracy metrics consistent (a completed trial with
reported overshoot must have reversed by more than the hysteresis to get back
into the band, so it always carries at least one switchback).
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import TrialGeometry, compute_target_band
from .trace import TrialTrace

DEFAULT_EPSILON_PX = 2.0


@dataclass(frozen=True)
class TrialMetrics:
    """The three dependent measures plus completion bookkeeping.

    For incomplete trials the metrics still cover the full trace;
    ``end_event_index`` is None and ``movement_time_ms`` is the last event's
    timestamp (0 for an empty trace). ``first_overshoot_at_ms`` records when
    the offset first exceeded ``s_max``, so the stricter reversal count that
    ignores pre-overshoot switchbacks stays recoverable from the raw trace.
    """

    movement_time_ms: int
    switchbacks: int
    max_overshoot_px: float
    completed: bool
    end_event_index: int | None
    first_overshoot_at_ms: int | None


def detect_trial_end(trace: TrialTrace, band: tuple[float, float]) -> int | None:
    """Index of the event that completes the trial, or None if it never does.

    Returns the smallest ``i`` whose offset lies in ``band`` with no event in
    ``(t_i, t_i + quiescence_ms]``. Quiescent rests outside the band do not
    complete the trial.
    """
    s_min, s_max = band
    events = trace.events
    q = trace.quiescence_ms
    for i, ev in enumerate(events):
        if not s_min <= ev.s <= s_max:
            continue
        if i + 1 == len(events) or events[i + 1].t > ev.t + q:
            return i
    return None


def count_reversals(positions: list[float], epsilon_px: float) -> list[int]:
    """Indices into ``positions`` where a hysteresis reversal fires.

    ``positions[0]`` is the start offset; the initial direction is the task
    direction (increasing). Both forward-to-backward and backward-to-forward
    flips count.
    """
    reversals: list[int] = []
    if not positions:
        return reversals
    direction = 1
    extreme = positions[0]
    for k in range(1, len(positions)):
        p = positions[k]
        if direction > 0:
            if p > extreme:
                extreme = p
            elif extreme - p > epsilon_px:
                reversals.append(k)
                direction = -1
                extreme = p
        else:
            if p < extreme:
                extreme = p
            elif p - extreme > epsilon_px:
                reversals.append(k)
                direction = 1
                extreme = p
    return reversals


def overshoot_px(positions: list[float], s_max: float, epsilon_px: float) -> float:
    """Largest excess of the offset above ``s_max``; excursions within the
    hysteresis threshold are treated as jitter and reported as 0."""
    peak = max(positions, default=0.0)
    excess = peak - s_max
    return excess if excess > epsilon_px else 0.0


def compute_metrics(
    trace: TrialTrace,
    g: TrialGeometry,
    *,
    epsilon_px: float = DEFAULT_EPSILON_PX,
) -> TrialMetrics:
    """Single-pass metrics over the completing prefix of the trace.

    Post-completion events never affect the result; incomplete traces are
    measured in full and flagged.
    """
    band = compute_target_band(g)
    end = detect_trial_end(trace, band)
    events = trace.events if end is None else trace.events[: end + 1]

    if events:
        movement_time = events[-1].t - trace.start_click_t
    else:
        movement_time = 0

    positions = [0.0] + [ev.s for ev in events]
    switchbacks = len(count_reversals(positions, epsilon_px))
    overshoot = overshoot_px(positions, band[1], epsilon_px)

    first_overshoot: int | None = None
    for ev in events:
        if ev.s > band[1]:
            first_overshoot = ev.t - trace.start_click_t
            break

    return TrialMetrics(
        movement_time_ms=movement_time,
        switchbacks=switchbacks,
        max_overshoot_px=overshoot,
        completed=end is not None,
        end_event_index=end,
        first_overshoot_at_ms=first_overshoot,
    )


def switchbacks_after_first_overshoot(
    trace: TrialTrace,
    g: TrialGeometry,
    *,
    epsilon_px: float = DEFAULT_EPSILON_PX,
) -> int:
    """Stricter accuracy count: reversals at or after the first band exit.

    Some analyses only treat post-overshoot corrections as errors; this
    recovers that count from the raw trace without changing the stored
    metrics.
    """
    band = compute_target_band(g)
    end = detect_trial_end(trace, band)
    events = trace.events if end is None else trace.events[: end + 1]
    positions = [0.0] + [ev.s for ev in events]
    reversal_idx = count_reversals(positions, epsilon_px)
    first_over = next((k for k in range(1, len(positions)) if positions[k] > band[1]), None)
    if first_over is None:
        return 0
    # A reversal firing at the overshooting event itself is the swing into the
    # overshoot, not a correction of it; only later reversals count.
    return sum(1 for k in reversal_idx if k > first_over)
