#!/usr/bin/env python3
"""
🧪 SIMPLE SYSTEM TEST
Quick checks of state handling, the pipeline agents, logging and configuration
"""
import json

import pytest

from simple_logging import RunMetrics, get_simple_stats, log_error, log_message, log_success
from src.config import Config
from src.core import InputError, SignedCompleteGraph
from src.records import read_records
from src.workflow import (
    MessageType,
    SupervisorAgent,
    add_message,
    create_initial_state,
    get_system,
    run_sweep,
    sweep_cell,
)

SMALL = {"n": 4, "plus_edges": [[1, 2], [3, 4], [1, 3]]}


def test_state_management():
    """State dictionary starts empty and collects messages"""
    state = create_initial_state("paths", {"seed": 3})
    assert state["command"] == "paths"
    assert state["params"] == {"seed": 3}
    assert state["error_count"] == 0

    add_message(state, MessageType.REQUEST, "test message", "test_agent")
    assert len(state["messages"]) == 1
    assert state["messages"][0]["type"] == "request"


def test_supervisor_routing():
    """Supervisor hands the state to the first stage with missing output"""
    supervisor = SupervisorAgent()
    state = create_initial_state("paths")
    assert supervisor.should_continue(state) == "loader"
    state["host"] = SignedCompleteGraph.all_plus(4)
    assert supervisor.should_continue(state) == "solver"
    state["result"] = {"m_h": 3}
    assert supervisor.should_continue(state) == "certifier"
    state["certificate"] = {"certificate_pass": True}
    assert supervisor.should_continue(state) == "recorder"
    state["error_count"] = 1
    assert supervisor.should_continue(state) == "end"


def test_paths_pipeline():
    state = get_system().run("paths", {"instance": SMALL, "persist": False})
    assert not state["error_count"]
    assert state["result"]["paths"] == [[2, 1, 3, 4]]
    assert state["result"]["m_h"] == 3
    assert state["certificate"]["certificate_pass"] is True
    assert state["record"]["command"] == "paths"
    agents = [m["agent"] for m in state["messages"]]
    assert agents[:1] == ["user"] and agents[-1] == "recorder"
    assert read_records() == []


def test_pipeline_persists_records():
    get_system().run("exact", {"instance": SMALL})
    records = read_records()
    assert len(records) == 1
    assert records[0].outputs["m_plus"] == 3
    assert records[0].outputs["max_abs_signed_sum"] == 2


def test_embed_and_spectrum_pipelines():
    embed = get_system().run("embed", {"instance": SMALL, "kind": "path", "persist": False})
    assert embed["result"]["m_plus"] == 3
    assert embed["result"]["expectation"] == "9/4"
    assert embed["certificate"]["certificate_pass"]

    spec = get_system().run("spectrum", {"instance": SMALL, "persist": False})
    assert spec["result"]["values"] == [0, 1, 2]
    assert spec["certificate"]["certificate_pass"]


def test_discrepancy_and_triangle_pipelines():
    host = {"n": 6, "plus_edges": [[1, 2], [1, 3], [2, 3], [4, 5], [4, 6], [5, 6]]}
    triangles = get_system().run("triangles", {"instance": host, "persist": False})
    assert triangles["result"]["m_plus"] == 6
    assert triangles["certificate"]["certificate_pass"]

    discrepancy = get_system().run("discrepancy", {"instance": host, "persist": False})
    assert discrepancy["certificate"]["certificate_pass"]
    assert discrepancy["result"]["removed"] == [6]


@pytest.mark.parametrize(
    "command, params, message",
    [
        ("paths", {}, "no instance given"),
        ("embed", {"instance": SMALL, "pattern_inline": {"n": 6, "edges": [[1, 2]]}}, "dimension mismatch"),
        ("paths", {"instance": {"n": 4, "plus_edges": [[1, 9]]}}, "plus_edges[0]"),
        ("triangles", {"instance": SMALL}, "divisible by 3"),
        ("colour", {"instance": SMALL}, "unknown command"),
    ],
)
def test_pipeline_errors(command, params, message):
    state = get_system().run(command, dict(params, persist=False))
    assert state["error_count"] == 1
    assert message in state["error"]


def test_sweep_cells():
    cell = sweep_cell("paths", 12, 0)
    assert cell["error"] is None
    assert cell["row"]["pass"] is True
    assert cell["row"]["metric"] >= cell["row"]["bound"]
    assert len(run_sweep("paths", [12], 2)) == 2
    grid = run_sweep("embed", [12], 1, ds=[0.4, 0.6], deltas=[1, 2, 3])
    assert [(row["delta"], row["seed"]) for row in (cell["row"] for cell in grid)] == [(1, 0), (2, 0), (3, 0)] * 2
    assert all(cell["row"]["pass"] for cell in grid)
    with pytest.raises(InputError):
        run_sweep("colour", [12], 1)


def test_logging(capsys):
    """Logs go to stderr and to system.log"""
    log_message("Test message")
    log_success("Test success")
    log_error("Test error")
    log_message("hidden", "DEBUG")
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "Test message" in captured.err and "hidden" not in captured.err
    text = (Config.LOG_DIR / "system.log").read_text(encoding="utf-8")
    assert "SUCCESS: ✅ Test success" in text


def test_metrics():
    assert get_simple_stats() == "No metrics file found"
    metrics = RunMetrics()
    metrics.start_run("paths")
    metrics.add_stage("loader")
    metrics.finish_run(success=True)
    line = json.loads((Config.LOG_DIR / "metrics.jsonl").read_text(encoding="utf-8"))
    assert line["command"] == "paths" and line["stages_used"] == 1
    stats = get_simple_stats()
    assert stats["total_runs"] == 1 and stats["success_rate"] == "100.0%"


def test_config(monkeypatch):
    assert Config.get_invalid_settings() == []
    monkeypatch.setattr(Config, "WORKERS", 0)
    monkeypatch.setattr(Config, "PATH_START", "random")
    assert Config.get_invalid_settings() == ["PLUSKIT_WORKERS", "PLUSKIT_START"]
