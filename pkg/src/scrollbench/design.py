"""Counterbalanced study plans: device assignment, blocks, and trial order.

The default registry covers the eleven stock scrolling techniques. A session
plan walks each assigned technique through the unknown-target condition then
the known-target condition; within each condition the frame heights form
sub-blocks in seeded random order, and all distances appear once per
sub-block, also in seeded random order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DesignError
from .rng import SplitMix64

Condition = str  # "unknown" | "known"
CONDITIONS: tuple[Condition, Condition] = ("unknown", "known")

DISTANCES: tuple[int, ...] = (8, 9, 10, 11, 20, 30, 40, 50, 60, 70, 80, 90, 99)
FRAME_FACTORS: tuple[float, ...] = (1.0, 1.5, 2.0, 2.5, 3.0)

# Last row visible at trial start with the canonical square area.
VISIBLE_ROWS = 10


@dataclass(frozen=True)
class Technique:
    id: str
    label: str


DEFAULT_TECHNIQUES: tuple[Technique, ...] = (
    Technique("flick-phone", "Flicking (phone)"),
    Technique("flick-tablet", "Flicking (tablet)"),
    Technique("touchpad-two-finger", "Two-finger scrolling on a laptop touchpad"),
    Technique("wheel-notched", "Mouse wheel with notches"),
    Technique("wheel-smooth", "Mouse wheel without notches"),
    Technique("roller-mouse", "Roller mouse"),
    Technique("trackball-ring", "Trackball scroll ring"),
    Technique("scrollbar-thumb", "Scrollbar, dragging the thumb"),
    Technique("in-keyboard-joystick", "In-keyboard joystick"),
    Technique("keyboard-arrows", "Keyboard arrow keys"),
    Technique("scrollbar-arrow-buttons", "Scrollbar, pressing the arrow buttons"),
)

DEFAULT_TECHNIQUE_IDS: tuple[str, ...] = tuple(t.id for t in DEFAULT_TECHNIQUES)

_LABELS = {t.id: t.label for t in DEFAULT_TECHNIQUES}


def technique_label(technique_id: str) -> str:
    return _LABELS.get(technique_id, technique_id)


def group_distance(d: int, visible_rows: int = VISIBLE_ROWS) -> str:
    """Distance class of target row ``d``: visible / short / long.

    A row is ``visible`` when it is already on screen at trial start
    (``d <= visible_rows``), ``short`` up to row 50, ``long`` beyond.
    """
    if d < 2:
        raise DesignError(f"target row {d} leaves no room to scroll up")
    if d <= visible_rows:
        return "visible"
    if d <= 50:
        return "short"
    return "long"


@dataclass(frozen=True)
class TrialSpec:
    """One cell of the design: condition x technique x frame height x distance."""

    condition: Condition
    technique: str
    frame_height_factor: float
    target_row_index: int
    distance_group: str
    require_click: bool
    seq: int


@dataclass(frozen=True)
class SessionPlan:
    participant_id: str
    techniques: tuple[str, ...]
    trials: tuple[TrialSpec, ...]
    rng_seed: int


def assign_devices(
    participant_count: int,
    techniques: tuple[str, ...] | list[str],
    per_participant: int,
) -> list[list[str]]:
    """Balanced cyclic assignment of ``per_participant`` techniques each.

    Participant ``i`` receives the block of consecutive technique indices
    starting at ``i * per_participant`` (mod the registry size), so the
    assignment enumerates consecutive integers and every technique lands in
    exactly ``participant_count * per_participant / len(techniques)``
    sessions. Requires that quotient to be an integer.
    """
    m = len(techniques)
    if m == 0:
        raise DesignError("no techniques to assign")
    if per_participant < 1 or per_participant > m:
        raise DesignError(f"per-participant count {per_participant} outside 1..{m}")
    if (participant_count * per_participant) % m != 0:
        raise DesignError(
            f"{participant_count} participants x {per_participant} techniques "
            f"cannot be balanced over {m} techniques"
        )
    return [
        [techniques[(i * per_participant + j) % m] for j in range(per_participant)]
        for i in range(participant_count)
    ]


def generate_session_plan(
    participant_id: str,
    techniques: list[str] | tuple[str, ...],
    seed: int,
    *,
    distances: tuple[int, ...] = DISTANCES,
    frame_factors: tuple[float, ...] = FRAME_FACTORS,
    require_click: bool = False,
    visible_rows: int = VISIBLE_ROWS,
) -> SessionPlan:
    """Deterministic full trial order for one participant session.

    Per technique: unknown block then known block; per block: the frame
    heights in a fresh seeded order, each carrying all distances in a fresh
    seeded order. The same (participant, seed) always yields the same plan.
    """
    if not techniques:
        raise DesignError("session needs at least one technique")
    rng = SplitMix64(seed)
    trials: list[TrialSpec] = []
    seq = 1
    for technique in techniques:
        for condition in CONDITIONS:
            for factor in rng.shuffled(frame_factors):
                for d in rng.shuffled(distances):
                    trials.append(
                        TrialSpec(
                            condition=condition,
                            technique=technique,
                            frame_height_factor=factor,
                            target_row_index=d,
                            distance_group=group_distance(d, visible_rows),
                            require_click=require_click,
                            seq=seq,
                        )
                    )
                    seq += 1
    return SessionPlan(
        participant_id=participant_id,
        techniques=tuple(techniques),
        trials=tuple(trials),
        rng_seed=seed,
    )
