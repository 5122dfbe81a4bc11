#!/usr/bin/env python3
"""Scripted participant: complete one technique block against a live server.

Creates a session over HTTP, then answers every issued trial with a
simulated scroll trace until the block is done. Useful for smoke-testing a
deployment without a browser.

    scrollbench serve --port 8000 --data-dir ./data &
    python scripts/drive_server_block.py --url http://127.0.0.1:8000 \
        --technique flick-phone
"""

from __future__ import annotations

import argparse
import sys

import httpx

from scrollbench.design import TrialSpec
from scrollbench.geometry import TrialGeometry
from scrollbench.simulate import AgentParams, simulate_trial
from scrollbench.store import metrics_to_json


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--url", default="http://127.0.0.1:8000")
    parser.add_argument("--participant", default="scripted-01")
    parser.add_argument("--technique", default="flick-phone")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--rate", type=float, default=30.0, help="scan speed, lines/s")
    args = parser.parse_args()

    agent = AgentParams(
        kind="constant-rate", reaction_ms=400, rate=args.rate, correction_noise=4.0
    )
    client = httpx.Client(base_url=args.url, timeout=30.0)

    created = client.post(
        "/api/sessions",
        json={
            "participantId": args.participant,
            "technique": args.technique,
            "deviceLabel": "scripted client",
            "seed": args.seed,
        },
    )
    created.raise_for_status()
    session_id = created.json()["sessionId"]
    print(f"session {session_id}", file=sys.stderr)

    accepted = mismatches = 0
    while True:
        issued = client.get(f"/api/sessions/{session_id}/trial").json()
        if issued.get("done"):
            break
        spec = TrialSpec(
            condition=issued["condition"],
            technique=issued["technique"],
            frame_height_factor=issued["frameHeightFactor"],
            target_row_index=issued["targetRowIndex"],
            distance_group=issued["distanceGroup"],
            require_click=issued["requireClick"],
            seq=issued["seq"],
        )
        geometry = TrialGeometry.from_layout(
            issued["suggestedLineHeightPx"],
            issued["documentRows"],
            spec.frame_height_factor,
            spec.target_row_index,
            issued["visibleRows"],
        )
        trial = simulate_trial(
            agent, spec, geometry, seed=args.seed * 100_000 + issued["seq"],
            quiescence_ms=issued["quiescenceMs"], epsilon_px=issued["epsilonPx"],
        )
        resp = client.post(
            f"/api/sessions/{session_id}/trials/{issued['seq']}",
            json={
                "geometry": {
                    "lineHeightPx": geometry.line_height_px,
                    "viewportHeightPx": geometry.viewport_height_px,
                    "frameTopPx": geometry.frame_top_px,
                    "frameBottomPx": geometry.frame_bottom_px,
                },
                "trace": {
                    "events": [[ev.t, ev.s] for ev in trial.trace.events],
                    "startClickT": 0,
                    "quiescenceMs": issued["quiescenceMs"],
                },
                "clientMetrics": metrics_to_json(trial.ground_truth),
            },
        )
        resp.raise_for_status()
        payload = resp.json()
        accepted += 1
        mismatches += bool(payload["mismatch"])

    print(f"accepted {accepted} trials, {mismatches} mismatches")
    return 0 if mismatches == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
