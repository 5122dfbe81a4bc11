"""Raw scroll-event streams and their ingestion contract."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import TraceError

DEFAULT_QUIESCENCE_MS = 66


class ScrollEvent(NamedTuple):
    """One scroll sample: ``t`` ms since trial start, ``s`` px scrolled from the top."""

    t: int
    s: float


@dataclass(frozen=True)
class TrialTrace:
    """Timestamped scroll offsets for one trial.

    The timing origin is the start-button click (``start_click_t``, 0 by
    convention); event timestamps are integer milliseconds on the same clock,
    strictly increasing. An empty event list is a valid trial that never
    completes.
    """

    events: tuple[ScrollEvent, ...] = ()
    start_click_t: int = 0
    quiescence_ms: int = DEFAULT_QUIESCENCE_MS

    def __post_init__(self) -> None:
        if self.quiescence_ms <= 0:
            raise TraceError("quiescenceMs", "quiescence window must be positive")
        prev: int | None = None
        for ev in self.events:
            if ev.t < self.start_click_t:
                raise TraceError("events", f"event at t={ev.t} precedes the start click")
            if prev is not None and ev.t <= prev:
                raise TraceError("events", f"timestamps not strictly increasing at t={ev.t}")
            prev = ev.t


def sanitize_events(raw: Iterable[tuple[float, float]]) -> list[ScrollEvent]:
    """Coerce raw ``(t, s)`` pairs into events, dropping timestamp ties.

    Timestamps must be non-negative integers in milliseconds; when two events
    share a timestamp the first is kept and the rest dropped. Decreasing
    timestamps are rejected outright.
    """
    events: list[ScrollEvent] = []
    prev_t: int | None = None
    for t, s in raw:
        ti = int(t)
        if ti != t:
            raise TraceError("events", f"timestamp {t!r} is not an integer millisecond")
        if ti < 0:
            raise TraceError("events", f"negative timestamp {ti}")
        if prev_t is not None:
            if ti < prev_t:
                raise TraceError("events", f"timestamp {ti} decreases after {prev_t}")
            if ti == prev_t:
                continue  # tie: keep the first
        events.append(ScrollEvent(ti, float(s)))
        prev_t = ti
    return events


def validate_offsets(events: Iterable[ScrollEvent], s_doc_max: float) -> None:
    """Reject offsets outside the scrollable range ``[0, s_doc_max]``."""
    for ev in events:
        if not 0.0 <= ev.s <= s_doc_max + 1e-9:
            raise TraceError(
                "events",
                f"scroll offset {ev.s} at t={ev.t} outside [0, {s_doc_max}]",
            )
