"""Randomized cross-validation of the metrics engine against the oracle.

The trace generator deliberately mixes the awkward cases: empty and tiny
traces, sub-pixel jitter, deep overshoots with corrections, quiescent rests
both inside and outside the band, and post-completion tails.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .geometry import TrialGeometry, band_contains, compute_target_band
from .metrics import compute_metrics
from .oracle import replay_oracle
from .trace import ScrollEvent, TrialTrace


def random_geometry(rng: np.random.Generator) -> TrialGeometry:
    line = float(rng.choice([30.0, 48.0, 60.0, 90.0]))
    factor = float(rng.choice([1.0, 1.5, 2.0, 2.5, 3.0]))
    target = int(rng.integers(8, 100))
    return TrialGeometry.from_layout(
        line_height_px=line,
        row_count=104,
        frame_height_factor=factor,
        target_row_index=target,
        visible_rows=10,
    )


def random_trace(rng: np.random.Generator, g: TrialGeometry, quiescence_ms: int = 66) -> TrialTrace:
    """Jittery goal-directed walk toward the band with rests and overshoots."""
    s_min, s_max = compute_target_band(g)
    center = (s_min + s_max) / 2.0
    n = int(rng.integers(0, 260))
    events: list[ScrollEvent] = []
    t = 0
    pos = 0.0
    phase_target = center * float(rng.uniform(0.8, 1.25))
    for _ in range(n):
        # Mostly event-rate gaps, occasionally a rest longer than quiescence.
        roll = rng.random()
        if roll < 0.06:
            t += int(rng.integers(quiescence_ms + 4, quiescence_ms * 4))
        elif roll < 0.16:
            t += int(rng.integers(40, quiescence_ms + 3))
        else:
            t += int(rng.integers(4, 36))
        step = (phase_target - pos) * float(rng.uniform(0.05, 0.3))
        jitter = float(rng.normal(0.0, 2.5))
        pos = min(max(pos + step + jitter, 0.0), g.s_doc_max)
        events.append(ScrollEvent(t, pos))
        if rng.random() < 0.08:
            phase_target = center + float(rng.normal(0.0, g.line_height_px * 2.0))
        if rng.random() < 0.04:
            # Deliberate overshoot excursion target.
            phase_target = s_max + float(rng.uniform(0.0, 4.0 * g.line_height_px))
    return TrialTrace(events=tuple(events), quiescence_ms=quiescence_ms)


@dataclass
class SelftestResult:
    traces: int
    mismatches: list[str]
    band_errors: list[str]
    elapsed_s: float

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.band_errors


def run_selftest(n_traces: int = 1000, seed: int = 0) -> SelftestResult:
    """Engine-vs-oracle equality over random traces plus a band containment scan."""
    rng = np.random.default_rng(seed)
    started = time.perf_counter()
    mismatches: list[str] = []
    for i in range(n_traces):
        g = random_geometry(rng)
        trace = random_trace(rng, g)
        eps = float(rng.choice([0.0, 1.0, 2.0, 5.0]))
        engine = compute_metrics(trace, g, epsilon_px=eps)
        oracle = replay_oracle(trace, g, epsilon_px=eps)
        if engine != oracle:
            mismatches.append(f"trace {i}: engine={engine} oracle={oracle}")

    band_errors: list[str] = []
    for i in range(20):
        g = random_geometry(rng)
        s_min, s_max = compute_target_band(g)
        for s in range(0, int(g.s_doc_max) + 1):
            formula = s_min <= s <= s_max
            if formula != band_contains(g, float(s)):
                band_errors.append(f"geometry {i}: disagreement at s={s}")
                break
    return SelftestResult(
        traces=n_traces,
        mismatches=mismatches,
        band_errors=band_errors,
        elapsed_s=time.perf_counter() - started,
    )
