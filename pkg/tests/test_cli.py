from __future__ import annotations

import json

import pytest

from scrollbench.cli import main
from scrollbench.config import StudyConfig, save_config
from scrollbench.store import SessionStore


@pytest.fixture
def tiny_config_file(tmp_path):
    config = StudyConfig(
        techniques=("flick-phone", "wheel-notched"),
        distances=(8, 40, 99),
        frame_factors=(1.0, 2.0),
        per_participant_techniques=2,
        participants=1,
    )
    path = tmp_path / "study.json"
    save_config(config, path)
    return path


def test_simulate_then_validate_then_analyze(tiny_config_file, tmp_path, capsys):
    data_dir = tmp_path / "data"
    assert main(["simulate", "--config", str(tiny_config_file), "--seed", "3",
                 "--out", str(data_dir)]) == 0
    out = capsys.readouterr().out
    assert "wrote 2 sessions / 24 trials" in out

    assert main(["validate", "--data", str(data_dir)]) == 0
    assert "zero mismatches" in capsys.readouterr().out

    report_dir = tmp_path / "report"
    assert main(["analyze", "--data", str(data_dir), "--out", str(report_dir)]) == 0
    capsys.readouterr()
    assert (report_dir / "summary.csv").exists()
    assert (report_dir / "fits.csv").exists()
    assert (report_dir / "report.txt").exists()
    summary = (report_dir / "summary.csv").read_text().splitlines()
    assert len(summary) == 1 + 2 * 2  # header + technique x condition


def test_analyze_to_stdout(tiny_config_file, tmp_path, capsys):
    data_dir = tmp_path / "data"
    main(["simulate", "--config", str(tiny_config_file), "--seed", "3", "--out", str(data_dir)])
    capsys.readouterr()
    assert main(["analyze", "--data", str(data_dir)]) == 0
    assert "Per-technique summary" in capsys.readouterr().out


def test_analyze_empty_dir_fails(tmp_path, capsys):
    assert main(["analyze", "--data", str(tmp_path / "nothing")]) == 1
    assert "no sessions found" in capsys.readouterr().err


def test_validate_flags_engine_drift(tiny_config_file, tmp_path, capsys):
    data_dir = tmp_path / "data"
    main(["simulate", "--config", str(tiny_config_file), "--seed", "3", "--out", str(data_dir)])
    capsys.readouterr()
    # corrupt a stored serverMetrics field to emulate drift
    store = SessionStore(data_dir)
    path = store._path(store.session_ids()[0])
    lines = path.read_text().splitlines()
    record = json.loads(lines[1])
    record["serverMetrics"]["switchbacks"] += 5
    lines[1] = json.dumps(record, separators=(",", ":"))
    path.write_text("\n".join(lines) + "\n")
    assert main(["validate", "--data", str(data_dir)]) == 1
    out = capsys.readouterr().out
    assert "mismatch" in out and "FAIL" in out


def test_selftest_subcommand(capsys):
    assert main(["selftest", "--trials", "120", "--seed", "5"]) == 0
    out = capsys.readouterr().out
    assert "ok: 120 traces engine==oracle" in out


def test_custom_agents_file(tiny_config_file, tmp_path, capsys):
    agents = {
        "flick-phone": {"kind": "constant-rate", "rate": 30.0, "reaction_ms": 500},
        "wheel-notched": {"kind": "notched-increment", "notch_hz": 12.0, "max_hz": 12.0},
    }
    agents_path = tmp_path / "agents.json"
    agents_path.write_text(json.dumps(agents))
    data_dir = tmp_path / "data"
    assert main(["simulate", "--config", str(tiny_config_file), "--agents", str(agents_path),
                 "--seed", "9", "--out", str(data_dir)]) == 0
    assert "wrote 2 sessions" in capsys.readouterr().out


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])  # missing required --data
    assert exc.value.code == 2
