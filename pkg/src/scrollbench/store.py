"""Append-only persistence of sessions, raw traces, and derived metrics.

One line-delimited JSON file per session under ``<root>/sessions/``. The
first line is the session header (participant, technique, provenance, config
snapshot); every further line is one trial carrying the full raw event
stream. Raw traces are never mutated: metrics are derived data, recomputed on
ingestion (``serverMetrics``) and recomputable at any time (``revalidate``).
The metrics CSV is a projection, never the source of truth.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
import shutil
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .design import TrialSpec, group_distance
from .errors import StoreError
from .geometry import TrialGeometry
from .metrics import DEFAULT_EPSILON_PX, TrialMetrics, compute_metrics
from .report import TrialRow
from .trace import ScrollEvent, TrialTrace, validate_offsets

SCHEMA_VERSION = 1

_SAFE_ID = re.compile(r"[A-Za-z0-9._-]{1,128}")

METRICS_CSV_COLUMNS = (
    "sessionId",
    "seq",
    "technique",
    "condition",
    "H",
    "D",
    "distanceGroup",
    "time_ms",
    "switchbacks",
    "max_overshoot_px",
    "completed",
    "mismatch",
)


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    participant_id: str
    technique: str
    device_label: str
    created_at: str  # ISO-8601 UTC
    provenance: str  # "human" | "simulated"
    config: dict


@dataclass(frozen=True)
class TrialRecord:
    session_id: str
    seq: int
    spec: TrialSpec
    geometry: TrialGeometry
    trace: TrialTrace
    epsilon_px: float
    client_metrics: TrialMetrics
    server_metrics: TrialMetrics
    mismatch: bool


@dataclass
class MismatchReport:
    """Outcome of revalidating stored trials against the current engine."""

    trials_checked: int = 0
    diffs: list[tuple[str, int, str, object, object]] = field(default_factory=list)
    unreadable: list[tuple[str, int, str]] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.diffs and not self.unreadable


def metrics_to_json(m: TrialMetrics) -> dict:
    return {
        "movementTimeMs": m.movement_time_ms,
        "switchbacks": m.switchbacks,
        "maxOvershootPx": m.max_overshoot_px,
        "completed": m.completed,
        "endEventIndex": m.end_event_index,
        "firstOvershootAtMs": m.first_overshoot_at_ms,
    }


def metrics_from_json(data: dict) -> TrialMetrics:
    return TrialMetrics(
        movement_time_ms=int(data["movementTimeMs"]),
        switchbacks=int(data["switchbacks"]),
        max_overshoot_px=float(data["maxOvershootPx"]),
        completed=bool(data["completed"]),
        end_event_index=data["endEventIndex"],
        first_overshoot_at_ms=data["firstOvershootAtMs"],
    )


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class SessionStore:
    """Single-writer-per-session durable store rooted at a directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.sessions_dir = self.root / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._last_seq: dict[str, int] = {}

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.jsonl"

    # -- creation and append ------------------------------------------------

    def create_session(
        self,
        session_id: str,
        participant_id: str,
        technique: str,
        device_label: str,
        provenance: str,
        config: dict,
        created_at: str | None = None,
    ) -> SessionRecord:
        if not _SAFE_ID.fullmatch(session_id):
            raise StoreError(f"session id {session_id!r} not filesystem-safe")
        if provenance not in ("human", "simulated"):
            raise StoreError(f"provenance must be human or simulated, got {provenance!r}")
        path = self._path(session_id)
        with self._lock_for(session_id):
            if path.exists():
                raise StoreError(f"session {session_id} already exists")
            record = SessionRecord(
                session_id=session_id,
                participant_id=participant_id,
                technique=technique,
                device_label=device_label,
                created_at=created_at or _utc_now_iso(),
                provenance=provenance,
                config=config,
            )
            header = {
                "kind": "session",
                "schemaVersion": SCHEMA_VERSION,
                "sessionId": record.session_id,
                "participantId": record.participant_id,
                "technique": record.technique,
                "deviceLabel": record.device_label,
                "createdAt": record.created_at,
                "provenance": record.provenance,
                "config": record.config,
            }
            self._append_line(path, header)
            self._last_seq[session_id] = 0
        return record

    def append_trial(
        self,
        session_id: str,
        seq: int,
        spec: TrialSpec,
        geometry: TrialGeometry,
        trace: TrialTrace,
        client_metrics: TrialMetrics,
        epsilon_px: float = DEFAULT_EPSILON_PX,
    ) -> TrialRecord:
        """Validate, recompute metrics authoritatively, and persist one trial.

        The ack (returning) happens only after the line is flushed and
        fsynced. Sequence numbers must be strictly increasing per session.
        """
        path = self._path(session_id)
        with self._lock_for(session_id):
            if not path.exists():
                raise StoreError(f"unknown session {session_id}")
            last = self._last_seq.get(session_id)
            if last is None:
                last = self._scan_last_seq(session_id)
            if seq <= last:
                raise StoreError(
                    f"sequence {seq} not after last stored sequence {last} "
                    f"for session {session_id}"
                )
            validate_offsets(trace.events, geometry.s_doc_max)
            server_metrics = compute_metrics(trace, geometry, epsilon_px=epsilon_px)
            mismatch = server_metrics != client_metrics
            record = TrialRecord(
                session_id=session_id,
                seq=seq,
                spec=spec,
                geometry=geometry,
                trace=trace,
                epsilon_px=epsilon_px,
                client_metrics=client_metrics,
                server_metrics=server_metrics,
                mismatch=mismatch,
            )
            self._append_line(path, _trial_to_json(record))
            self._last_seq[session_id] = seq
        return record

    @staticmethod
    def _append_line(path: Path, obj: dict) -> None:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _scan_last_seq(self, session_id: str) -> int:
        last = 0
        for record in self._iter_lines(self._path(session_id)):
            if record.get("kind") == "trial":
                last = max(last, int(record["seq"]))
        self._last_seq[session_id] = last
        return last

    # -- reading ------------------------------------------------------------

    @staticmethod
    def _iter_lines(path: Path):
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)

    def session_ids(self) -> list[str]:
        return sorted(p.stem for p in self.sessions_dir.glob("*.jsonl"))

    def load_session(self, session_id: str) -> tuple[SessionRecord, list[TrialRecord]]:
        path = self._path(session_id)
        if not path.exists():
            raise StoreError(f"unknown session {session_id}")
        header: SessionRecord | None = None
        trials: list[TrialRecord] = []
        for record in self._iter_lines(path):
            if record.get("kind") == "session":
                header = SessionRecord(
                    session_id=record["sessionId"],
                    participant_id=record["participantId"],
                    technique=record["technique"],
                    device_label=record["deviceLabel"],
                    created_at=record["createdAt"],
                    provenance=record["provenance"],
                    config=record["config"],
                )
            elif record.get("kind") == "trial":
                if header is None:
                    raise StoreError(f"session {session_id}: trial line before header")
                trials.append(_trial_from_json(record, header))
        if header is None:
            raise StoreError(f"session {session_id}: missing header line")
        return header, trials

    def trial_count(self, session_id: str) -> int:
        if not self._path(session_id).exists():
            raise StoreError(f"unknown session {session_id}")
        return self._scan_last_seq(session_id)

    def iter_sessions(
        self,
        technique: str | None = None,
        provenance: str | None = None,
        participant_id: str | None = None,
    ):
        for session_id in self.session_ids():
            header, trials = self.load_session(session_id)
            if technique and header.technique != technique:
                continue
            if provenance and header.provenance != provenance:
                continue
            if participant_id and header.participant_id != participant_id:
                continue
            yield header, trials

    def trial_rows(self, condition: str | None = None, **filters) -> list[TrialRow]:
        """Server-metric projection for the analysis layer."""
        rows: list[TrialRow] = []
        for header, trials in self.iter_sessions(**filters):
            for t in trials:
                if condition and t.spec.condition != condition:
                    continue
                rows.append(
                    TrialRow(
                        session_id=t.session_id,
                        seq=t.seq,
                        technique=t.spec.technique,
                        condition=t.spec.condition,
                        frame_height_factor=t.spec.frame_height_factor,
                        target_row_index=t.spec.target_row_index,
                        distance_group=t.spec.distance_group,
                        time_ms=t.server_metrics.movement_time_ms,
                        switchbacks=t.server_metrics.switchbacks,
                        max_overshoot_px=t.server_metrics.max_overshoot_px,
                        completed=t.server_metrics.completed,
                        mismatch=t.mismatch,
                    )
                )
        return rows

    # -- export / import / revalidate ----------------------------------------

    def export_sessions(self, out_dir: str | Path, **filters) -> list[str]:
        """Copy matching session files verbatim and emit the metrics CSV.

        Verbatim copies keep export -> import -> export a byte-level fixed
        point. Returns the exported session ids.
        """
        out = Path(out_dir)
        (out / "sessions").mkdir(parents=True, exist_ok=True)
        exported: list[str] = []
        for header, _ in self.iter_sessions(**filters):
            shutil.copyfile(
                self._path(header.session_id), out / "sessions" / f"{header.session_id}.jsonl"
            )
            exported.append(header.session_id)
        csv_text = self.metrics_csv(**filters)
        (out / "metrics.csv").write_text(csv_text, encoding="utf-8")
        return exported

    def metrics_csv(self, **filters) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(METRICS_CSV_COLUMNS)
        for header, trials in self.iter_sessions(**filters):
            for t in trials:
                writer.writerow(
                    [
                        t.session_id,
                        t.seq,
                        t.spec.technique,
                        t.spec.condition,
                        t.spec.frame_height_factor,
                        t.spec.target_row_index,
                        t.spec.distance_group,
                        t.server_metrics.movement_time_ms,
                        t.server_metrics.switchbacks,
                        repr(t.server_metrics.max_overshoot_px),
                        "true" if t.server_metrics.completed else "false",
                        "true" if t.mismatch else "false",
                    ]
                )
        return buf.getvalue()

    def revalidate(
        self,
        quiescence_ms: int | None = None,
        epsilon_px: float | None = None,
    ) -> MismatchReport:
        """Recompute every trial's metrics with the current engine.

        Overrides let the caller check what a config change would do; by
        default each trial is rechecked under its stored parameters. Corrupt
        lines are reported and skipped, never fatal.
        """
        report = MismatchReport()
        for session_id in self.session_ids():
            path = self._path(session_id)
            header: SessionRecord | None = None
            for line_no, raw in enumerate(self._open_raw(path), start=1):
                try:
                    record = json.loads(raw)
                    if record.get("kind") == "session":
                        header = SessionRecord(
                            session_id=record["sessionId"],
                            participant_id=record["participantId"],
                            technique=record["technique"],
                            device_label=record["deviceLabel"],
                            created_at=record["createdAt"],
                            provenance=record["provenance"],
                            config=record["config"],
                        )
                        continue
                    if record.get("kind") != "trial":
                        continue
                    if header is None:
                        raise StoreError("trial line before session header")
                    trial = _trial_from_json(record, header)
                except Exception as exc:  # noqa: BLE001 - fault isolation per line
                    report.unreadable.append((str(path), line_no, str(exc)))
                    continue
                report.trials_checked += 1
                trace = trial.trace
                if quiescence_ms is not None and quiescence_ms != trace.quiescence_ms:
                    trace = TrialTrace(
                        events=trace.events,
                        start_click_t=trace.start_click_t,
                        quiescence_ms=quiescence_ms,
                    )
                eps = trial.epsilon_px if epsilon_px is None else epsilon_px
                fresh = compute_metrics(trace, trial.geometry, epsilon_px=eps)
                if fresh != trial.server_metrics:
                    stored = metrics_to_json(trial.server_metrics)
                    current = metrics_to_json(fresh)
                    for key in stored:
                        if stored[key] != current[key]:
                            report.diffs.append(
                                (trial.session_id, trial.seq, key, stored[key], current[key])
                            )
        return report

    @staticmethod
    def _open_raw(path: Path):
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line.strip():
                    yield line


def _trial_to_json(record: TrialRecord) -> dict:
    return {
        "kind": "trial",
        "schemaVersion": SCHEMA_VERSION,
        "sessionId": record.session_id,
        "seq": record.seq,
        "condition": record.spec.condition,
        "technique": record.spec.technique,
        "frameHeightFactor": record.spec.frame_height_factor,
        "targetRowIndex": record.spec.target_row_index,
        "lineHeightPx": record.geometry.line_height_px,
        "viewportHeightPx": record.geometry.viewport_height_px,
        "frameTopPx": record.geometry.frame_top_px,
        "frameBottomPx": record.geometry.frame_bottom_px,
        "quiescenceMs": record.trace.quiescence_ms,
        "epsilonPx": record.epsilon_px,
        "events": [[ev.t, ev.s] for ev in record.trace.events],
        "clientMetrics": metrics_to_json(record.client_metrics),
        "serverMetrics": metrics_to_json(record.server_metrics),
        "mismatch": record.mismatch,
    }


def _trial_from_json(record: dict, header: SessionRecord) -> TrialRecord:
    config = header.config or {}
    document_rows = int(config.get("documentRows", 104))
    visible_rows = int(config.get("visibleRows", 10))
    geometry = TrialGeometry(
        line_height_px=float(record["lineHeightPx"]),
        row_count=document_rows,
        viewport_height_px=float(record["viewportHeightPx"]),
        frame_top_px=float(record["frameTopPx"]),
        frame_bottom_px=float(record["frameBottomPx"]),
        target_row_index=int(record["targetRowIndex"]),
    )
    d = int(record["targetRowIndex"])
    spec = TrialSpec(
        condition=record["condition"],
        technique=record["technique"],
        frame_height_factor=float(record["frameHeightFactor"]),
        target_row_index=d,
        distance_group=group_distance(d, visible_rows),
        require_click=bool(config.get("requireClick", False)),
        seq=int(record["seq"]),
    )
    events = tuple(ScrollEvent(int(t), float(s)) for t, s in record["events"])
    trace = TrialTrace(
        events=events,
        start_click_t=0,
        quiescence_ms=int(record["quiescenceMs"]),
    )
    return TrialRecord(
        session_id=record["sessionId"],
        seq=int(record["seq"]),
        spec=spec,
        geometry=geometry,
        trace=trace,
        epsilon_px=float(record["epsilonPx"]),
        client_metrics=metrics_from_json(record["clientMetrics"]),
        server_metrics=metrics_from_json(record["serverMetrics"]),
        mismatch=bool(record["mismatch"]),
    )


def persist_simulation(store: SessionStore, sessions, config) -> int:
    """Write a simulate_study result into the store; returns trial count.

    The agent's ground truth plays the role of capture-time client metrics,
    so simulated and human data are indistinguishable downstream apart from
    the provenance flag.
    """
    total = 0
    for session in sessions:
        store.create_session(
            session_id=session.session_id,
            participant_id=session.participant_id,
            technique=session.technique,
            device_label="synthetic agent",
            provenance="simulated",
            config=config.to_dict(),
        )
        for trial in session.trials:
            store.append_trial(
                session_id=session.session_id,
                seq=trial.spec.seq,
                spec=trial.spec,
                geometry=trial.geometry,
                trace=trial.trace,
                client_metrics=trial.ground_truth,
                epsilon_px=config.epsilon_px,
            )
            total += 1
    return total
