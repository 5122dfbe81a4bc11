"""Command-line entry points: serve, simulate, analyze, validate, selftest.

Exit codes: 0 success, 1 validation/run failure, 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import StudyConfig, load_config
from .errors import DesignError
from .report import (
    aggregate_report,
    correlations_to_csv,
    fits_to_csv,
    report_as_text,
    summary_to_csv,
)
from .selftest import run_selftest
from .simulate import AgentParams, default_agents, simulate_study
from .store import SessionStore, persist_simulation

DATA_DIR_ENV = "SCROLLBENCH_DATA_DIR"


def _load_config(path: str | None) -> StudyConfig:
    return load_config(path) if path else StudyConfig()


def _load_agents(path: str | None, config: StudyConfig) -> dict[str, AgentParams]:
    if path is None:
        return default_agents(config)
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    agents = {}
    for technique, params in raw.items():
        agents[technique] = AgentParams(**params)
    return agents


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    config = _load_config(args.config)
    data_dir = args.data_dir or os.environ.get(DATA_DIR_ENV) or "./data"
    store = SessionStore(data_dir)
    static = args.static if args.static and Path(args.static).is_dir() else None
    app = create_app(config, store, static_dir=static)
    print(f"serving on port {args.port}, data dir {data_dir}", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    agents = _load_agents(args.agents, config)
    try:
        sessions = simulate_study(config, agents, args.seed)
    except DesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    store = SessionStore(args.out)
    total = persist_simulation(store, sessions, config)
    print(f"wrote {len(sessions)} sessions / {total} trials to {args.out}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    store = SessionStore(args.data)
    rows = store.trial_rows()
    if not rows:
        print("error: no sessions found", file=sys.stderr)
        return 1
    try:
        report = aggregate_report(rows, per_trial_fits=args.per_trial)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.csv").write_text(summary_to_csv(report), encoding="utf-8")
        (out / "fits.csv").write_text(fits_to_csv(report), encoding="utf-8")
        (out / "correlations.csv").write_text(correlations_to_csv(report), encoding="utf-8")
        (out / "report.txt").write_text(report_as_text(report), encoding="utf-8")
        print(f"wrote summary.csv, fits.csv, correlations.csv, report.txt to {out}")
    else:
        print(report_as_text(report), end="")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    store = SessionStore(args.data)
    report = store.revalidate()
    print(f"checked {report.trials_checked} trials")
    for path, line_no, error in report.unreadable:
        print(f"unreadable: {path}:{line_no}: {error}")
    for session_id, seq, fieldname, stored, current in report.diffs:
        print(f"mismatch: {session_id} seq={seq} {fieldname}: stored={stored} recomputed={current}")
    if report.clean:
        print("ok: zero mismatches")
        return 0
    print(f"FAIL: {len(report.diffs)} field diffs, {len(report.unreadable)} unreadable lines")
    return 1


def _cmd_selftest(args: argparse.Namespace) -> int:
    result = run_selftest(n_traces=args.trials, seed=args.seed)
    for line in result.mismatches[:20]:
        print(f"mismatch: {line}")
    for line in result.band_errors:
        print(f"band error: {line}")
    status = "ok" if result.ok else "FAIL"
    print(
        f"{status}: {result.traces} traces engine==oracle "
        f"({len(result.mismatches)} mismatches), band scan "
        f"({len(result.band_errors)} errors), {result.elapsed_s:.2f}s"
    )
    return 0 if result.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scrollbench",
        description="Scrolling speed/accuracy benchmark: server, simulator, analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the trial server")
    p.add_argument("--config", help="study config JSON")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", help=f"session store directory (or ${DATA_DIR_ENV})")
    p.add_argument("--static", help="directory with built frontend assets")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("simulate", help="write a full synthetic study")
    p.add_argument("--config", help="study config JSON")
    p.add_argument("--agents", help="JSON map of technique -> agent params")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True, help="output store directory")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("analyze", help="aggregate stored sessions into report tables")
    p.add_argument("--data", required=True, help="session store directory")
    p.add_argument("--out", help="write CSV/text tables here instead of stdout")
    p.add_argument("--per-trial", action="store_true", help="fit per-trial points, not per-distance means")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("validate", help="recompute all stored metrics; exit 0 iff clean")
    p.add_argument("--data", required=True, help="session store directory")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("selftest", help="engine-vs-oracle property suite")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
