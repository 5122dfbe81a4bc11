"""Kinematic scroller agents that generate ground-truthed synthetic trials.

Agents close the loop on the acceptance band: they aim at the band center
with Gaussian landing error, pause to "think" after a miss, and issue
correction movements until they rest inside the band. Every emitted movement
is a monotone segment sampled at the event cadence, so the agent can derive
its own metrics (time, reversals, overshoot) from the planned segment
endpoints without consulting the metrics engine; the engine re-deriving the
same numbers from the raw event stream is the cross-validation the simulator
exists for.

Three agent kinds:

- ``constant-rate``: one sweep whose duration is budgeted against the nominal
  task distance (the target row index), giving exactly affine T(D). Also the
  behavior every agent falls back to when it does not know the target
  position and must scan.
- ``flick-friction``: known-target ballistic scroller. Each flick covers half
  the remaining nominal distance and costs a fixed time per halving, so T(D)
  grows logarithmically; peak segment velocity is proportional to the
  remaining distance.
- ``notched-increment``: stepwise scroller moving one notch at a time with a
  hard rate cap; even a target-aware user cannot exceed the cap, so T(D)
  stays close to linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import StudyConfig
from .design import TrialSpec, assign_devices, generate_session_plan
from .errors import AgentDivergedError, DesignError
from .geometry import TrialGeometry, compute_target_band
from .metrics import DEFAULT_EPSILON_PX, TrialMetrics
from .reference import LINEAR_UNKNOWN, LOG_KNOWN
from .rng import SplitMix64
from .trace import DEFAULT_QUIESCENCE_MS, ScrollEvent, TrialTrace

AGENT_KINDS = ("constant-rate", "flick-friction", "notched-increment")

# Flick waypoints stay outside every stock band for D >= 8 when the flick
# phase stops at least this many nominal lines short of the target.
MIN_STOP_LINES = 3.3


@dataclass(frozen=True)
class AgentParams:
    """Tunable scroller behavior; fields are interpreted per ``kind``."""

    kind: str
    reaction_ms: int = 300
    rate: float = 20.0  # lines/s; scan speed, and the constant-rate speed
    flick_gain: float = 1.0  # halvings per second when the target is known
    friction_decay: float = 0.9985  # per-ms velocity multiplier shaping glides
    notch_lines: float = 1.0
    notch_hz: float = 10.0
    max_hz: float = 20.0
    ramp_lines: float = 10.0  # distance scale over which a notched user speeds up
    correction_noise: float = 6.0  # px std-dev of landing error
    knows_target: bool = False
    think_ms: int = 150  # pause before a correction movement
    settle_ms: int = 250  # final approach duration for flick agents
    stop_lines: float = 4.0  # flick phase ends this many nominal lines out
    snap_px: float = 1.5  # precision floor: land exactly when aimed this close
    cadence_ms: int = 16
    max_corrections: int = 50

    def __post_init__(self) -> None:
        if self.kind not in AGENT_KINDS:
            raise DesignError(f"unknown agent kind {self.kind!r}; expected one of {AGENT_KINDS}")
        if self.rate <= 0 or self.flick_gain <= 0 or self.notch_hz <= 0 or self.max_hz <= 0:
            raise DesignError("rates and gains must be positive")
        if not 0.0 < self.friction_decay < 1.0:
            raise DesignError("frictionDecay must lie in (0, 1)")
        if self.correction_noise < 0:
            raise DesignError("correctionNoise must be non-negative")
        if self.notch_lines <= 0:
            raise DesignError("notchLines must be positive")
        if self.cadence_ms < 1:
            raise DesignError("cadence must be at least 1 ms")
        if self.reaction_ms < 0:
            raise DesignError("reaction delay cannot be negative")


@dataclass(frozen=True)
class SimTrial:
    spec: TrialSpec
    geometry: TrialGeometry
    trace: TrialTrace
    ground_truth: TrialMetrics
    seed: int


@dataclass(frozen=True)
class SimSession:
    session_id: str
    participant_id: str
    technique: str
    seed: int
    trials: tuple[SimTrial, ...]


class _TraceBuilder:
    """Accumulates integer-timestamped events and the agent's bookkeeping."""

    def __init__(self, band_top: float, cadence_ms: int, start_ms: int):
        self.band_top = band_top
        self.cadence_ms = cadence_ms
        self.t = start_ms
        self.events: list[ScrollEvent] = []
        self.endpoints: list[float] = [0.0]
        self.first_overshoot_at: int | None = None

    def _emit(self, t: int, s: float) -> None:
        self.events.append(ScrollEvent(t, s))
        if self.first_overshoot_at is None and s > self.band_top:
            self.first_overshoot_at = t

    def pause(self, ms: float) -> None:
        self.t += max(0, int(ms))

    def glide(self, s_from: float, s_to: float, duration_ms: float, shape: float = 0.0) -> None:
        """Monotone movement segment ending exactly at ``s_to``.

        ``shape`` > 0 bends the profile into a decelerating flick (fast
        start); 0 is constant velocity. Samples are clamped between the
        endpoints so the segment extremes are exactly the endpoints.
        """
        duration = max(1, int(round(duration_ms)))
        t0 = self.t
        span = s_to - s_from
        lo, hi = (s_from, s_to) if span >= 0 else (s_to, s_from)
        denom = 1.0 - math.exp(-shape) if shape > 0 else 1.0
        tau = t0 + self.cadence_ms
        while tau < t0 + duration:
            u = (tau - t0) / duration
            phi = (1.0 - math.exp(-shape * u)) / denom if shape > 0 else u
            s = s_from + span * phi
            self._emit(tau, min(max(s, lo), hi))
            tau += self.cadence_ms
        self._emit(t0 + duration, s_to)
        self.t = t0 + duration
        self.endpoints.append(s_to)


def _endpoint_reversals(endpoints: list[float], epsilon_px: float) -> int:
    """Hysteresis reversal count over planned segment endpoints.

    Segments are monotone, so the stream's local extremes are exactly these
    endpoints and the count matches a scan of the full event stream.
    """
    count = 0
    direction = 1.0
    extreme = endpoints[0]
    for p in endpoints[1:]:
        if (p - extreme) * direction >= 0:
            extreme = p
        elif (extreme - p) * direction > epsilon_px:
            count += 1
            direction = -direction
            extreme = p
    return count


def _flick_shape(agent: AgentParams, duration_ms: float) -> float:
    return -math.log(agent.friction_decay) * duration_ms


def simulate_trial(
    agent: AgentParams,
    spec: TrialSpec,
    geometry: TrialGeometry,
    seed: int,
    *,
    quiescence_ms: int = DEFAULT_QUIESCENCE_MS,
    epsilon_px: float = DEFAULT_EPSILON_PX,
) -> SimTrial:
    """Run one closed-loop trial; deterministic for a given seed.

    Raises AgentDivergedError when the correction budget runs out before the
    agent rests inside the band.
    """
    if agent.cadence_ms >= quiescence_ms:
        raise DesignError("event cadence must be shorter than the quiescence window")
    rng = np.random.default_rng(seed)
    s_min, s_max = compute_target_band(geometry)
    center = (s_min + s_max) / 2.0
    line = geometry.line_height_px
    d_nominal = float(spec.target_row_index)
    knows = agent.knows_target and spec.condition == "known"

    builder = _TraceBuilder(band_top=s_max, cadence_ms=agent.cadence_ms, start_ms=agent.reaction_ms)

    def in_band(s: float) -> bool:
        return s_min <= s <= s_max

    def aimed(sigma: float) -> float:
        aim = center + (rng.normal(0.0, sigma) if sigma > 0 else 0.0)
        clipped = min(max(aim, s_min), s_max)
        if abs(aim - clipped) <= agent.snap_px:
            aim = clipped
        return min(max(aim, 0.0), geometry.s_doc_max)

    pos = 0.0

    def corrections_until_rest(px_per_s: float, flick_profile: bool) -> None:
        nonlocal pos
        attempts = 0
        while not in_band(pos):
            attempts += 1
            if attempts > agent.max_corrections:
                raise AgentDivergedError(
                    f"agent diverged: {attempts - 1} corrections without resting in the band "
                    f"(target row {spec.target_row_index}, band [{s_min:.1f}, {s_max:.1f}])"
                )
            builder.pause(agent.think_ms)
            sigma = agent.correction_noise * (0.5**attempts)
            aim = aimed(sigma)
            duration = max(100.0, 1000.0 * abs(aim - pos) / max(px_per_s, 1.0))
            shape = _flick_shape(agent, duration) if flick_profile else 0.0
            builder.glide(pos, aim, duration, shape)
            pos = aim

    if agent.kind == "notched-increment":
        pos = _run_notched(agent, builder, aimed, in_band, center, line, geometry.s_doc_max, knows)
    elif agent.kind == "flick-friction" and knows:
        # Ballistic halvings of the nominal remaining distance, then a settle.
        per_halving_ms = 1000.0 / agent.flick_gain
        stop = max(agent.stop_lines, MIN_STOP_LINES)
        remaining = d_nominal
        while remaining > stop + 1e-9:
            nxt = max(remaining / 2.0, stop)
            flight = max(32.0, per_halving_ms * math.log2(remaining / nxt))
            waypoint = center * (1.0 - nxt / d_nominal)
            builder.glide(pos, waypoint, flight, _flick_shape(agent, flight))
            pos = waypoint
            remaining = nxt
            if in_band(pos):
                break
        if not in_band(pos):
            aim = aimed(agent.correction_noise)
            builder.glide(pos, aim, agent.settle_ms, _flick_shape(agent, agent.settle_ms))
            pos = aim
            px_per_s = max(center, line) / max(agent.settle_ms / 1000.0, 0.05)
            corrections_until_rest(px_per_s, flick_profile=True)
    else:
        # Constant-velocity sweep budgeted against the nominal task distance.
        motion_ms = d_nominal / agent.rate * 1000.0
        aim = aimed(agent.correction_noise)
        builder.glide(pos, aim, motion_ms)
        pos = aim
        px_per_s = max(center, line) / (motion_ms / 1000.0)
        corrections_until_rest(px_per_s, flick_profile=False)

    events = tuple(builder.events)
    trace = TrialTrace(events=events, start_click_t=0, quiescence_ms=quiescence_ms)
    peak = max(builder.endpoints)
    excess = peak - s_max
    ground_truth = TrialMetrics(
        movement_time_ms=events[-1].t if events else 0,
        switchbacks=_endpoint_reversals(builder.endpoints, epsilon_px),
        max_overshoot_px=excess if excess > epsilon_px else 0.0,
        completed=True,
        end_event_index=len(events) - 1 if events else None,
        first_overshoot_at_ms=builder.first_overshoot_at,
    )
    return SimTrial(spec=spec, geometry=geometry, trace=trace, ground_truth=ground_truth, seed=seed)


def _run_notched(
    agent: AgentParams,
    builder: _TraceBuilder,
    aimed,
    in_band,
    center: float,
    line: float,
    s_doc_max: float,
    knows: bool,
) -> float:
    """Stepwise notch scrolling with an in-band stop check after every step.

    Returns the final resting position. Landing inside the band ends the
    trial immediately (the user sees the target inside the frame and stops).
    """
    notch_px = agent.notch_lines * line
    pos = 0.0
    guard = 0
    while abs(center - pos) > notch_px / 2.0 + 1e-9:
        guard += 1
        if guard > 100_000:
            raise AgentDivergedError("agent diverged: notched stepping failed to approach band")
        remaining_lines = abs(center - pos) / line
        if knows:
            hz = min(agent.max_hz, agent.notch_hz * (1.0 + remaining_lines / agent.ramp_lines))
        else:
            hz = agent.notch_hz
        dwell = 1000.0 / hz
        anim = min(40.0, dwell * 0.8)
        step_to = pos + math.copysign(notch_px, center - pos)
        step_to = min(max(step_to, 0.0), s_doc_max)
        builder.glide(pos, step_to, anim)
        pos = step_to
        if in_band(pos):
            return pos
        builder.pause(dwell - anim)
    # Within half a notch of the center: precise final drags.
    attempts = 0
    while not in_band(pos):
        attempts += 1
        if attempts > agent.max_corrections:
            raise AgentDivergedError("agent diverged: fine positioning never reached the band")
        sigma = min(agent.correction_noise, line / 4.0) * (0.5 ** (attempts - 1))
        aim = aimed(sigma)
        builder.pause(agent.think_ms)
        builder.glide(pos, aim, max(120.0, abs(aim - pos) / max(line, 1.0) * 400.0))
        pos = aim
    return pos


def simulate_study(
    config: StudyConfig,
    agents_per_technique: dict[str, AgentParams],
    seed: int,
) -> list[SimSession]:
    """Full synthetic study matching the counterbalanced design.

    One session per participant x assigned technique, each holding the
    technique's unknown block followed by its known block.
    """
    missing = [t for t in config.techniques if t not in agents_per_technique]
    if missing:
        raise DesignError(f"no agent defined for techniques: {missing}")
    assignments = assign_devices(
        config.participants, config.techniques, config.per_participant_techniques
    )
    master = SplitMix64(seed)
    sessions: list[SimSession] = []
    for p_idx, technique_ids in enumerate(assignments):
        participant_id = f"p{p_idx + 1:02d}"
        for technique in technique_ids:
            session_seed = master.next_u64() & ((1 << 63) - 1)
            plan = generate_session_plan(
                participant_id,
                [technique],
                session_seed,
                distances=config.distances,
                frame_factors=config.frame_factors,
                require_click=config.require_click,
                visible_rows=config.visible_rows,
            )
            trial_seeds = SplitMix64(session_seed ^ 0xA5A5A5A5)
            agent = agents_per_technique[technique]
            trials = []
            for spec in plan.trials:
                geometry = TrialGeometry.from_layout(
                    config.line_height_px,
                    config.document_rows,
                    spec.frame_height_factor,
                    spec.target_row_index,
                    config.visible_rows,
                )
                trials.append(
                    simulate_trial(
                        agent,
                        spec,
                        geometry,
                        trial_seeds.next_u64() & ((1 << 63) - 1),
                        quiescence_ms=config.quiescence_ms,
                        epsilon_px=config.epsilon_px,
                    )
                )
            sessions.append(
                SimSession(
                    session_id=f"sim-{participant_id}-{technique}",
                    participant_id=participant_id,
                    technique=technique,
                    seed=session_seed,
                    trials=tuple(trials),
                )
            )
    return sessions


def calibrate_agent_to_coefficients(
    kind: str,
    a: float,
    b: float,
    model: str,
    *,
    settle_ms: int = 250,
    correction_noise: float = 4.0,
) -> AgentParams:
    """Agent whose expected T(D) reproduces the fitted model.

    Supported pairings: ``constant-rate`` with the linear model
    (rate = 1/b lines/s, reaction = a) and ``flick-friction`` with the log
    model (flick gain = 1/b halvings/s, with the flick-phase cutoff chosen so
    the intercept lands on ``a``). Raises ValueError for infeasible
    coefficients.
    """
    if model == "linear" and kind == "constant-rate":
        if abs(b) < 1e-12:
            raise ValueError("infeasible: infinite rate (b = 0)")
        if b < 0:
            raise ValueError("infeasible: negative rate")
        if a < 0:
            raise ValueError("infeasible: negative reaction delay")
        return AgentParams(
            kind="constant-rate",
            reaction_ms=int(round(a * 1000.0)),
            rate=1.0 / b,
            correction_noise=correction_noise,
            knows_target=False,
        )
    if model == "log2" and kind == "flick-friction":
        if b <= 0:
            raise ValueError("infeasible: non-positive slope for the log model")
        b_ms = b * 1000.0
        min_reaction = 50.0
        required_stop = 2.0 ** ((min_reaction + settle_ms - a * 1000.0) / b_ms)
        stop = max(MIN_STOP_LINES, required_stop)
        if stop > 7.0:
            raise ValueError(
                f"infeasible: intercept {a} needs a flick cutoff of {stop:.1f} lines, "
                "beyond the shortest task distance"
            )
        reaction = a * 1000.0 + b_ms * math.log2(stop) - settle_ms
        return AgentParams(
            kind="flick-friction",
            reaction_ms=int(round(reaction)),
            flick_gain=1.0 / b,
            stop_lines=stop,
            settle_ms=settle_ms,
            correction_noise=correction_noise,
            knows_target=True,
        )
    raise ValueError(f"unsupported calibration: kind={kind!r} with model={model!r}")


def default_agents(config: StudyConfig) -> dict[str, AgentParams]:
    """Reference-profile agents for the stock techniques.

    Scan behavior follows each technique's unknown-condition linear profile;
    smooth scrollers additionally flick when the target is known, while
    stepped devices stay rate-capped in both conditions.
    """
    stepped = {"wheel-notched", "keyboard-arrows", "scrollbar-arrow-buttons"}
    agents: dict[str, AgentParams] = {}
    for technique in config.techniques:
        a_u, b_u, _ = LINEAR_UNKNOWN.get(technique, (2.0, 0.05, 0.0))
        if technique in stepped:
            hz = 1.0 / b_u
            agents[technique] = AgentParams(
                kind="notched-increment",
                reaction_ms=int(round(a_u * 1000.0)),
                rate=1.0 / b_u,
                notch_lines=1.0,
                notch_hz=hz,
                max_hz=hz,  # the cap always binds: no speedup from knowing
                correction_noise=5.0,
                knows_target=True,
            )
            continue
        _, b_log, _ = LOG_KNOWN.get(technique, (0.0, 1.0, 0.0))
        agents[technique] = AgentParams(
            kind="flick-friction",
            reaction_ms=int(round(a_u * 1000.0)),
            rate=1.0 / b_u,
            flick_gain=1.0 / b_log,
            stop_lines=MIN_STOP_LINES,
            correction_noise=6.0,
            knows_target=True,
        )
    return agents
