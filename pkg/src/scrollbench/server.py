"""HTTP service: issues trials in plan order, ingests traces, serves reports.

Trial-end detection runs client-side for responsiveness, but the server
recomputes every metric from the submitted raw trace and its verdict wins;
client-reported numbers are stored only to flag disagreement (``mismatch``).
One session covers one technique block: the unknown condition's 65 trials
followed by the known condition's 65.

State is rebuilt from the store on demand, so a restarted server resumes any
session at the correct cursor.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .config import StudyConfig
from .design import SessionPlan, generate_session_plan
from .errors import GeometryError, StoreError, TraceError
from .geometry import TrialGeometry
from .report import aggregate_report
from .store import SessionStore, metrics_from_json, metrics_to_json
from .trace import TrialTrace, sanitize_events, validate_offsets

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>scrollbench</title></head>
<body><h1>scrollbench server</h1>
<p>No frontend build found. The JSON API lives under <code>/api</code>;
build the frontend and point <code>--static</code> at its dist directory
to serve the participant test page here.</p></body></html>
"""


class CreateSessionBody(BaseModel):
    participantId: str = Field(min_length=1, max_length=64)
    technique: str
    deviceLabel: str = ""
    seed: int | None = None


class GeometryBody(BaseModel):
    lineHeightPx: float
    viewportHeightPx: float
    frameTopPx: float
    frameBottomPx: float


class TraceBody(BaseModel):
    events: list[list[float]]
    startClickT: int = 0
    quiescenceMs: int | None = None


class SubmitTrialBody(BaseModel):
    geometry: GeometryBody
    trace: TraceBody
    clientMetrics: dict


@dataclass
class _ApiSession:
    session_id: str
    participant_id: str
    technique: str
    plan: SessionPlan
    cursor: int  # index into plan.trials of the next trial to run
    lock: threading.Lock


def _plan_from_config(participant_id: str, technique: str, seed: int, cfg: dict) -> SessionPlan:
    return generate_session_plan(
        participant_id,
        [technique],
        seed,
        distances=tuple(cfg["distances"]),
        frame_factors=tuple(cfg["frameFactors"]),
        require_click=bool(cfg["requireClick"]),
        visible_rows=int(cfg["visibleRows"]),
    )


def create_app(
    config: StudyConfig,
    store: SessionStore,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="scrollbench", version="0.1.0")
    sessions: dict[str, _ApiSession] = {}
    sessions_guard = threading.Lock()

    def get_session(session_id: str) -> _ApiSession:
        with sessions_guard:
            if session_id in sessions:
                return sessions[session_id]
        try:
            header, trials = store.load_session(session_id)
        except StoreError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        seed = int(header.config["sessionSeed"])
        plan = _plan_from_config(header.participant_id, header.technique, seed, header.config)
        session = _ApiSession(
            session_id=session_id,
            participant_id=header.participant_id,
            technique=header.technique,
            plan=plan,
            cursor=len(trials),
            lock=threading.Lock(),
        )
        with sessions_guard:
            return sessions.setdefault(session_id, session)

    @app.post("/api/sessions")
    def create_session(body: CreateSessionBody):
        if body.technique not in config.techniques:
            raise HTTPException(
                status_code=422,
                detail=f"unknown technique {body.technique!r}; expected one of {list(config.techniques)}",
            )
        seed = body.seed if body.seed is not None else uuid.uuid4().int & ((1 << 62) - 1)
        session_id = f"{body.participantId}-{body.technique}-{uuid.uuid4().hex[:8]}"
        snapshot = config.to_dict()
        snapshot["sessionSeed"] = seed
        store.create_session(
            session_id=session_id,
            participant_id=body.participantId,
            technique=body.technique,
            device_label=body.deviceLabel,
            provenance="human",
            config=snapshot,
        )
        plan = _plan_from_config(body.participantId, body.technique, seed, snapshot)
        with sessions_guard:
            sessions[session_id] = _ApiSession(
                session_id=session_id,
                participant_id=body.participantId,
                technique=body.technique,
                plan=plan,
                cursor=0,
                lock=threading.Lock(),
            )
        return {"sessionId": session_id, "config": snapshot, "trialCount": len(plan.trials)}

    @app.get("/api/sessions/{session_id}/trial")
    def next_trial(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if session.cursor >= len(session.plan.trials):
                return {"done": True}
            spec = session.plan.trials[session.cursor]
            return {
                "done": False,
                "seq": spec.seq,
                "condition": spec.condition,
                "technique": spec.technique,
                "frameHeightFactor": spec.frame_height_factor,
                "targetRowIndex": spec.target_row_index,
                "distanceGroup": spec.distance_group,
                "requireClick": spec.require_click,
                "documentRows": config.document_rows,
                "visibleRows": config.visible_rows,
                "suggestedLineHeightPx": config.line_height_px,
                "quiescenceMs": config.quiescence_ms,
                "epsilonPx": config.epsilon_px,
            }

    @app.post("/api/sessions/{session_id}/trials/{seq}")
    def submit_trial(session_id: str, seq: int, body: SubmitTrialBody):
        session = get_session(session_id)
        with session.lock:
            if session.cursor >= len(session.plan.trials):
                raise HTTPException(status_code=409, detail="session already complete")
            spec = session.plan.trials[session.cursor]
            if seq != spec.seq:
                raise HTTPException(
                    status_code=409,
                    detail=f"out-of-order result: expected seq {spec.seq}, got {seq}",
                )
            try:
                geometry = TrialGeometry(
                    line_height_px=body.geometry.lineHeightPx,
                    row_count=config.document_rows,
                    viewport_height_px=body.geometry.viewportHeightPx,
                    frame_top_px=body.geometry.frameTopPx,
                    frame_bottom_px=body.geometry.frameBottomPx,
                    target_row_index=spec.target_row_index,
                )
            except GeometryError as exc:
                raise HTTPException(status_code=422, detail=f"geometry: {exc}")
            factor = geometry.frame_height_factor
            if abs(factor - spec.frame_height_factor) > 0.02 * spec.frame_height_factor:
                raise HTTPException(
                    status_code=422,
                    detail=(
                        f"geometry: frame height factor {factor:.3f} does not match "
                        f"issued {spec.frame_height_factor}"
                    ),
                )
            try:
                events = sanitize_events(tuple((t, s) for t, s in body.trace.events))
                trace = TrialTrace(
                    events=tuple(events),
                    start_click_t=body.trace.startClickT,
                    quiescence_ms=body.trace.quiescenceMs or config.quiescence_ms,
                )
                validate_offsets(trace.events, geometry.s_doc_max)
            except TraceError as exc:
                raise HTTPException(status_code=422, detail=f"trace {exc.field}: {exc.message}")
            try:
                client_metrics = metrics_from_json(body.clientMetrics)
            except (KeyError, TypeError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=f"clientMetrics: {exc}")
            try:
                record = store.append_trial(
                    session_id=session_id,
                    seq=seq,
                    spec=spec,
                    geometry=geometry,
                    trace=trace,
                    client_metrics=client_metrics,
                    epsilon_px=config.epsilon_px,
                )
            except StoreError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            session.cursor += 1
            return {
                "accepted": True,
                "seq": seq,
                "serverMetrics": metrics_to_json(record.server_metrics),
                "mismatch": record.mismatch,
            }

    @app.get("/api/sessions/{session_id}/results")
    def session_results(session_id: str):
        get_session(session_id)  # 404 on unknown
        header, trials = store.load_session(session_id)
        return {
            "sessionId": session_id,
            "participantId": header.participant_id,
            "technique": header.technique,
            "provenance": header.provenance,
            "trials": [
                {
                    "seq": t.seq,
                    "condition": t.spec.condition,
                    "frameHeightFactor": t.spec.frame_height_factor,
                    "targetRowIndex": t.spec.target_row_index,
                    "distanceGroup": t.spec.distance_group,
                    "serverMetrics": metrics_to_json(t.server_metrics),
                    "mismatch": t.mismatch,
                }
                for t in trials
            ],
        }

    @app.get("/api/report")
    def report(
        technique: str | None = None,
        condition: str | None = None,
        provenance: str | None = None,
        perTrial: bool = False,
    ):
        rows = store.trial_rows(technique=technique, condition=condition, provenance=provenance)
        if not rows:
            raise HTTPException(status_code=404, detail="no sessions found")
        try:
            rep = aggregate_report(rows, per_trial_fits=perTrial)
        except ValueError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "trialCount": rep.trial_count,
            "incompleteCount": rep.incomplete_count,
            "mismatchCount": rep.mismatch_count,
            "summary": [vars(s) for s in rep.summary],
            "fits": [
                {"technique": t, "condition": c, "model": f.model, "a": f.a, "b": f.b, "r2": f.r2}
                for t, c, f in rep.fits
            ],
            "correlations": [
                {"condition": c, "metricX": mx, "metricY": my, "r": r}
                for c, mx, my, r in rep.correlations
            ],
            "frameSizeEffects": [
                {"condition": c, "metric": m, "r": r} for c, m, r in rep.frame_size_effects
            ],
        }

    @app.get("/api/config")
    def get_config():
        return config.to_dict()

    @app.get("/api/health", response_class=PlainTextResponse)
    def health():
        return "ok"

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app
