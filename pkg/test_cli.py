import json

import pytest

from main import main, parse_d_list, parse_n_range
from src.config import Config
from src.core import InputError, SignedCompleteGraph
from src.models import save_instance
from src.records import read_records


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(out[-1]) if out else None


def test_parse_n_range():
    assert parse_n_range("7") == [7]
    assert parse_n_range("12:20:4") == [12, 16, 20]
    assert parse_n_range("4:6") == [4, 5, 6]
    with pytest.raises(InputError):
        parse_n_range("20:12")
    with pytest.raises(InputError):
        parse_n_range("a:b")


def test_grid_flags():
    assert parse_n_range("1:3", "--delta") == [1, 2, 3]
    assert parse_n_range("1,3") == [1, 3]
    assert parse_d_list("0.3,0.5,0.7") == [0.3, 0.5, 0.7]
    assert parse_d_list(None) == [None]
    with pytest.raises(InputError, match="--delta"):
        parse_n_range("x", "--delta")
    with pytest.raises(InputError):
        parse_d_list("0.5,1.5")
    with pytest.raises(InputError):
        parse_d_list("half")


def test_bounds_command(capsys):
    code, payload = run(capsys, "bounds", "--n", "100", "--d", "0.5", "--delta", "2", "--m", "100")
    assert code == 0
    assert payload["value"] == pytest.approx(48.623, abs=1e-3)
    assert payload["case_taken"] == "d<=d*"
    assert payload["path_target"] == pytest.approx(203 - 21401 ** 0.5)
    assert payload["constants"]["delta"] == 2


def test_bounds_program(capsys):
    code, payload = run(capsys, "bounds", "--program")
    assert code == 0
    assert payload["triangle_program"]["value"] == pytest.approx(3 * 2 ** 0.5 / 4 - 0.5)
    assert payload["triangle_program"]["agree"] is True


def test_gen_then_paths(tmp_path, capsys):
    instance = tmp_path / "inst.json"
    results = tmp_path / "runs.jsonl"
    code, payload = run(capsys, "gen", "--kind", "random_balanced", "--n", "12", "--seed", "3", "--out", str(instance))
    assert code == 0 and payload["balanced"] is True

    code, record = run(capsys, "paths", "--in", str(instance), "--results", str(results))
    assert code == 0
    assert record["outputs"]["certificate_pass"] is True
    assert record["outputs"]["m_h"] >= record["outputs"]["bound_value"]
    assert read_records(results)[0].instance_digest == record["instance_digest"]


def test_gen_pattern_to_stdout(capsys):
    code, payload = run(capsys, "gen", "--kind", "clique_factor", "--n", "8", "--delta", "3")
    assert code == 0
    assert payload["n"] == 8 and len(payload["edges"]) == 12


def test_triangles_on_all_plus_host(tmp_path, capsys):
    instance = tmp_path / "k9.json"
    save_instance(SignedCompleteGraph.all_plus(9), instance)
    code, record = run(capsys, "triangles", "--in", str(instance), "--seed", "1")
    assert code == 0
    assert record["outputs"]["m_plus"] == 9
    assert len(read_records()) == 1


def test_input_errors_exit_with_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 4, "plus_edges": [[1, 5]]}', encoding="utf-8")
    assert run(capsys, "paths", "--in", str(bad))[0] == 2
    assert run(capsys, "paths", "--in", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "gen", "--kind", "bipartite_minus_matching", "--n", "10")[0] == 2
    assert run(capsys, "bounds", "--n", "3", "--d", "0.5", "--m", "2")[0] == 2


def test_invalid_settings_exit_with_two(monkeypatch, capsys):
    monkeypatch.setattr(Config, "WORKERS", 0)
    assert main(["bounds", "--n", "12"]) == 2


def test_sweep_command(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    results = tmp_path / "sweep.jsonl"
    code, payload = run(
        capsys, "sweep", "--kind", "paths", "--n", "12:16:4", "--seeds", "2",
        "--out", str(out), "--results", str(results),
    )
    assert code == 0
    assert payload == {"kind": "paths", "cells": 4, "failed": 0, "csv": str(out)}
    assert len(out.read_text(encoding="utf-8").strip().splitlines()) == 5
    assert len(read_records(results)) == 4


def test_sweep_over_densities_and_degrees(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code, payload = run(
        capsys, "sweep", "--kind", "embed", "--n", "12", "--d", "0.3,0.7", "--delta", "1:2",
        "--seeds", "2", "--out", str(out), "--results", str(tmp_path / "grid.jsonl"),
    )
    assert code == 0
    assert payload["cells"] == 8 and payload["failed"] == 0
    lines = out.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0] == "n,d,delta,seed,metric,bound,ratio,pass"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 8
    assert sorted({row[2] for row in rows}) == ["1", "2"]
    assert len({row[1] for row in rows}) == 2


def test_sweep_rejects_a_zero_degree_bound(tmp_path, capsys):
    code, _ = run(capsys, "sweep", "--kind", "embed", "--n", "12", "--delta", "0:1", "--out", str(tmp_path / "x.csv"))
    assert code == 2
