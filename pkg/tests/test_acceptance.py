"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.
"""

from __future__ import annotations

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from fastapi.testclient import TestClient

from scrollbench.config import StudyConfig
from scrollbench.design import DISTANCES, TrialSpec, group_distance
from scrollbench.geometry import TrialGeometry, band_contains, compute_target_band
from scrollbench.metrics import compute_metrics
from scrollbench.oracle import replay_oracle
from scrollbench.reference import (
    AGGREGATE_LINEAR_UNKNOWN,
    AGGREGATE_LOG_KNOWN,
    LINEAR_KNOWN,
    LINEAR_UNKNOWN,
    LOG_KNOWN,
    MEANS,
    SPEED_TIERS,
    pooled_mean_time_s,
)
from scrollbench.selftest import random_geometry, random_trace
from scrollbench.server import create_app
from scrollbench.simulate import (
    AgentParams,
    calibrate_agent_to_coefficients,
    default_agents,
    simulate_study,
    simulate_trial,
)
from scrollbench.stats import anova_oneway, fit_linear, fit_log2, pearson, tukey_hsd
from scrollbench.store import SessionStore, metrics_to_json, persist_simulation

from test_server import scripted_submission, walk_block


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[ACCEPT] {name}: FAIL", flush=True)
        raise
    print(f"[ACCEPT] {name}: PASS", flush=True)


def test_metrics_oracle_equivalence():
    with criterion("metrics-oracle equivalence (1000 traces, <10s)"):
        rng = np.random.default_rng(2024)
        started = time.perf_counter()
        for i in range(1000):
            g = random_geometry(rng)
            trace = random_trace(rng, g)
            eps = float(rng.choice([0.0, 1.0, 2.0, 5.0]))
            engine = compute_metrics(trace, g, epsilon_px=eps)
            oracle = replay_oracle(trace, g, epsilon_px=eps)
            assert engine == oracle, f"trace {i}: {engine} != {oracle}"
        elapsed = time.perf_counter() - started
        assert elapsed < 10.0, f"took {elapsed:.1f}s"


def test_band_property_exhaustive():
    with criterion("band formula == geometric containment (50 geometries)"):
        rng = np.random.default_rng(17)
        for _ in range(50):
            line = float(rng.choice([8.0, 10.0, 12.0, 15.0]))
            factor = float(rng.choice([1.0, 1.5, 2.0, 2.5, 3.0]))
            target = int(rng.integers(8, 30))
            g = TrialGeometry.from_layout(line, 34, factor, target)
            s_min, s_max = compute_target_band(g)
            for s in range(0, int(g.s_doc_max) + 1):
                assert (s_min <= s <= s_max) == band_contains(g, float(s))


def test_regression_round_trip_per_technique():
    with criterion("per-technique regression round-trip (11 x 3 models)"):
        for table, maker in (
            (LINEAR_UNKNOWN, lambda a, b, d: a + b * d),
            (LINEAR_KNOWN, lambda a, b, d: a + b * d),
            (LOG_KNOWN, lambda a, b, d: a + b * math.log2(d)),
        ):
            fitter = fit_log2 if table is LOG_KNOWN else fit_linear
            assert len(table) == 11
            for technique, (a, b, _) in table.items():
                points = [(float(d), maker(a, b, d)) for d in DISTANCES]
                fit = fitter(points)
                assert abs(fit.a - a) < 1e-6, (technique, fit)
                assert abs(fit.b - b) < 1e-6, (technique, fit)
                assert abs(fit.r2 - 1.0) < 1e-9, (technique, fit)


def test_aggregate_model_round_trip():
    with criterion("aggregate model round-trip + noisy recovery >=95/100"):
        a_lin, b_lin, _ = AGGREGATE_LINEAR_UNKNOWN
        a_log, b_log, _ = AGGREGATE_LOG_KNOWN

        fit = fit_linear([(float(d), a_lin + b_lin * d) for d in DISTANCES])
        assert abs(fit.a - a_lin) < 1e-9 and abs(fit.b - b_lin) < 1e-9
        fit = fit_log2([(float(d), a_log + b_log * math.log2(d)) for d in DISTANCES])
        assert abs(fit.a - a_log) < 1e-9 and abs(fit.b - b_log) < 1e-9

        for truth_b, model in ((b_lin, "linear"), (b_log, "log2")):
            hits = 0
            for seed in range(100):
                rng = np.random.default_rng(seed)
                points = []
                for d in DISTANCES:
                    x = math.log2(d) if model == "log2" else float(d)
                    base = (a_log + b_log * x) if model == "log2" else (a_lin + b_lin * x)
                    samples = base + rng.normal(0.0, 0.3, 195)
                    points.append((float(d), float(samples.mean())))
                fitted = fit_log2(points) if model == "log2" else fit_linear(points)
                if abs(fitted.b - truth_b) / truth_b <= 0.10:
                    hits += 1
            assert hits >= 95, f"{model}: only {hits}/100 runs within 10%"


def test_study_shape_reproduction():
    with criterion("full-scale study: 2145 trials/condition, ANOVA df (10, 2134)"):
        config = StudyConfig()
        sessions = simulate_study(config, default_agents(config), seed=7)
        by_condition: dict[str, dict[str, list[float]]] = {"unknown": {}, "known": {}}
        for session in sessions:
            for trial in session.trials:
                bucket = by_condition[trial.spec.condition].setdefault(
                    trial.spec.technique, []
                )
                bucket.append(trial.ground_truth.movement_time_ms / 1000.0)
        for condition, groups in by_condition.items():
            total = sum(len(v) for v in groups.values())
            assert total == 2145, (condition, total)
            result = anova_oneway(list(groups.values()))
            assert result.df_between == 10
            assert result.df_within == 2134


def _fit_winner(points) -> str:
    lin = fit_linear(points)
    log = fit_log2(points)
    return "log2" if log.r2 > lin.r2 else "linear"


def test_model_selection_property():
    with criterion("model selection: scan->linear, flick->log, capped->linear (>=18/20)"):
        scan_agents = {
            "scan-a": AgentParams(kind="constant-rate", reaction_ms=1100, rate=28.0, correction_noise=5.0),
            "scan-b": AgentParams(kind="constant-rate", reaction_ms=2000, rate=16.0, correction_noise=5.0),
            "scan-c": AgentParams(kind="flick-friction", reaction_ms=1500, rate=22.0,
                                  correction_noise=5.0, knows_target=False),
        }
        long_distances = [d for d in DISTANCES if d >= 11]

        def winners(agent: AgentParams, condition: str, distances, seed: int) -> str:
            points = []
            for i, d in enumerate(distances):
                g = TrialGeometry.from_layout(60.0, 104, 2.0, d)
                spec = TrialSpec(condition, "x", 2.0, d, group_distance(d), False, 1)
                trial = simulate_trial(agent, spec, g, seed=seed * 1009 + i)
                points.append((float(d), trial.ground_truth.movement_time_ms / 1000.0))
            return _fit_winner(points)

        for name, agent in scan_agents.items():
            hits = sum(
                winners(agent, "unknown", long_distances, seed) == "linear"
                for seed in range(20)
            )
            assert hits >= 18, f"{name}: linear won only {hits}/20"

        flick = calibrate_agent_to_coefficients("flick-friction", *AGGREGATE_LOG_KNOWN[:2], "log2")
        hits = sum(winners(flick, "known", DISTANCES, seed) == "log2" for seed in range(20))
        assert hits >= 18, f"flick: log won only {hits}/20"

        capped = AgentParams(
            kind="notched-increment", reaction_ms=800, notch_hz=12.0, max_hz=12.0,
            correction_noise=5.0, knows_target=True,
        )
        hits = sum(winners(capped, "known", DISTANCES, seed) == "linear" for seed in range(20))
        assert hits >= 18, f"capped notched: linear won only {hits}/20"


def test_tukey_partition_fixture():
    # Statistically marginal by construction: the target partition requires
    # the honest HSD to land in (1.04, 1.41) s while the same inequality pins
    # sample-mean noise at HSD/q ~ 0.23 s, so single runs recover the exact
    # partition only ~45% of the time regardless of n/alpha. Kept faithful to
    # the stated bar rather than loosened; see the analysis notes.
    with criterion("Tukey 3-tier partition recovery (>=8/10 seeded runs)"):
        techniques = list(MEANS)
        target = {frozenset(tier) for tier in SPEED_TIERS}
        hits = 0
        outcomes = []
        for seed in range(10):
            rng = np.random.default_rng(seed)
            groups = [pooled_mean_time_s(t) + rng.normal(0.0, 1.0, 20) for t in techniques]
            grouping = tukey_hsd(groups, alpha=0.01, labels=techniques)
            partition = {frozenset(g) for g in grouping.groups}
            outcomes.append(len(grouping.groups))
            hits += partition == target
        assert hits >= 8, f"exact partition in {hits}/10 runs (group counts: {outcomes})"


def test_statistics_identities():
    with criterion("statistics identities (SS, orthogonality, pearson, F)"):
        rng = np.random.default_rng(5)
        groups = [rng.normal(m, 1.1, 40) for m in (1.0, 1.5, 3.0, 3.2)]
        res = anova_oneway(groups)
        flat = np.concatenate(groups)
        ss_tot = float(((flat - flat.mean()) ** 2).sum())
        assert abs(res.ss_between + res.ss_within - ss_tot) < 1e-9 * max(1.0, ss_tot)

        x = rng.uniform(1, 100, 50)
        y = 2.0 + 0.05 * x + rng.normal(0, 0.4, 50)
        fit = fit_linear(list(zip(x, y)))
        residuals = y - (fit.a + fit.b * x)
        assert abs(residuals.sum()) < 1e-9
        assert abs((residuals * x).sum() / (abs(x).sum())) < 1e-9

        assert abs(pearson(list(x), list(x)) - 1.0) < 1e-9

        assert anova_oneway([[3.0, 3.0, 3.0], [3.0, 3.0, 3.0]]).f_stat == 0.0

        a, b = [1.0, 2.0, 3.0], [4.0, 6.0, 8.0]
        ma, mb = np.mean(a), np.mean(b)
        sp2 = (np.var(a, ddof=1) * 2 + np.var(b, ddof=1) * 2) / 4
        t = (ma - mb) / math.sqrt(sp2 * (2 / 3))
        assert abs(anova_oneway([a, b]).f_stat - t**2) < 1e-9


def test_store_round_trip(tmp_path):
    with criterion("store: export fixed point, clean revalidate, tamper flagged"):
        config = StudyConfig(
            techniques=("flick-phone", "wheel-notched"),
            distances=(8, 40, 99),
            frame_factors=(1.0, 2.0),
            per_participant_techniques=2,
            participants=1,
        )
        store = SessionStore(tmp_path / "data")
        sessions = simulate_study(config, default_agents(config), seed=3)
        persist_simulation(store, sessions, config)

        first = tmp_path / "e1"
        second = tmp_path / "e2"
        store.export_sessions(first)
        SessionStore(first).export_sessions(second)
        names = sorted(p.name for p in (first / "sessions").glob("*.jsonl"))
        assert names
        for name in names:
            assert (first / "sessions" / name).read_bytes() == (
                second / "sessions" / name
            ).read_bytes()
        assert (first / "metrics.csv").read_bytes() == (second / "metrics.csv").read_bytes()

        assert store.revalidate().clean

        trial = sessions[0].trials[0]
        tampered = metrics_to_json(trial.ground_truth)
        tampered_metrics = dict(tampered, switchbacks=tampered["switchbacks"] + 1)
        from scrollbench.store import metrics_from_json

        record = store.append_trial(
            sessions[0].session_id,
            seq=trial.spec.seq + 1000,
            spec=trial.spec,
            geometry=trial.geometry,
            trace=trial.trace,
            client_metrics=metrics_from_json(tampered_metrics),
            epsilon_px=config.epsilon_px,
        )
        assert record.mismatch


def test_server_contract(tmp_path):
    with criterion("server: 130-trial block, 409, 422, restart resume"):
        config = StudyConfig()  # full-scale block: 2 x 5 x 13 = 130 trials
        store_dir = tmp_path / "data"
        client = TestClient(create_app(config, SessionStore(store_dir)))
        resp = client.post(
            "/api/sessions",
            json={"participantId": "p01", "technique": "flick-phone",
                  "deviceLabel": "scripted", "seed": 55},
        )
        assert resp.status_code == 200
        session_id = resp.json()["sessionId"]

        # 409 on out-of-order seq
        issued = client.get(f"/api/sessions/{session_id}/trial").json()
        body = scripted_submission(config, issued, seed=0)
        assert (
            client.post(f"/api/sessions/{session_id}/trials/{issued['seq'] + 5}", json=body)
            .status_code
            == 409
        )
        # 422 on decreasing timestamps
        bad = scripted_submission(config, issued, seed=0)
        bad["trace"]["events"] = [[100, 5.0], [90, 6.0]]
        assert (
            client.post(f"/api/sessions/{session_id}/trials/{issued['seq']}", json=bad)
            .status_code
            == 422
        )

        # first half of the block, then a restart
        for _ in range(60):
            issued = client.get(f"/api/sessions/{session_id}/trial").json()
            body = scripted_submission(config, issued, seed=issued["seq"])
            assert (
                client.post(
                    f"/api/sessions/{session_id}/trials/{issued['seq']}", json=body
                ).status_code
                == 200
            )

        client2 = TestClient(create_app(config, SessionStore(store_dir)))
        resumed = client2.get(f"/api/sessions/{session_id}/trial").json()
        assert resumed["seq"] == 61
        accepted = walk_block(client2, config, session_id)
        assert accepted == 70
        results = client2.get(f"/api/sessions/{session_id}/results").json()
        assert len(results["trials"]) == 130
        assert sum(1 for t in results["trials"] if t["condition"] == "unknown") == 65
        assert sum(1 for t in results["trials"] if t["condition"] == "known") == 65
        assert not any(t["mismatch"] for t in results["trials"])
