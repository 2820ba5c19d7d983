import csv

import pytest

from src.generators import pattern_factory, random_labeling
from src.models import InstanceFile, save_instance
from src.records import (
    CSV_COLUMNS,
    RunRecord,
    append_record,
    instance_digest,
    read_records,
    summarize,
    write_summary_csv,
)
from src.workflow import get_system


def test_digest_ignores_field_and_edge_order():
    first = InstanceFile.model_validate_json('{"plus_edges": [[3, 4], [1, 2]], "n": 4}').to_graph()
    second = InstanceFile.model_validate_json('{"n": 4, "plus_edges": [[1, 2], [3, 4]]}').to_graph()
    assert instance_digest(first) == instance_digest(second)
    assert len(instance_digest(first)) == 64
    assert instance_digest(first) != instance_digest(first, pattern_factory("path", 4))


def test_records_round_trip_through_jsonl(tmp_path):
    path = tmp_path / "runs.jsonl"
    append_record(RunRecord(command="paths", instance_digest="a" * 64, seed=1, outputs={"m_h": 7}), path)
    append_record(RunRecord(command="paths", instance_digest="b" * 64), path)
    records = read_records(path)
    assert [r.instance_digest[0] for r in records] == ["a", "b"]
    assert records[0].outputs == {"m_h": 7}
    assert read_records(tmp_path / "missing.jsonl") == []


def test_default_results_file():
    append_record(RunRecord(command="exact", instance_digest="c" * 64))
    assert len(read_records()) == 1


def test_summary_per_command(tmp_path):
    path = tmp_path / "runs.jsonl"
    for passed in (True, False):
        append_record(
            RunRecord(
                command="embed",
                instance_digest="d" * 64,
                outputs={"certificate_pass": passed, "bound_value": 2.0, "m_plus": 3},
            ),
            path,
        )
    append_record(RunRecord(command="exact", instance_digest="e" * 64, outputs={"certificate_pass": True}), path)
    summary = summarize(path)
    assert summary["embed"] == {"runs": 2, "passed": 1, "pass_rate": 0.5, "mean_ratio": 1.5}
    assert summary["exact"]["mean_ratio"] is None


def test_summary_csv_columns(tmp_path):
    rows = [{"n": 12, "d": 0.5, "delta": 1, "seed": 0, "metric": 8, "bound": 5.6, "ratio": 1.4, "pass": True,
             "extra": "dropped"}]
    path = write_summary_csv(rows, tmp_path / "out" / "sweep.csv")
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        assert tuple(reader.fieldnames) == CSV_COLUMNS
        assert next(reader)["metric"] == "8"


@pytest.mark.parametrize(
    "command, extra",
    [
        ("embed", {"kind": "hamiltonian"}),
        ("paths", {}),
        ("triangles", {"seed": 3}),
        ("discrepancy", {}),
    ],
)
def test_replaying_a_record_reproduces_its_outputs(tmp_path, command, extra):
    instance = tmp_path / "inst.json"
    results = tmp_path / "runs.jsonl"
    save_instance(random_labeling(12, balanced=True, seed=4), instance)
    get_system().run(command, dict(extra, **{"in": str(instance), "results": str(results)}))

    (record,) = read_records(results)
    replay = get_system().run(record.command, dict(record.params, persist=False))["record"]
    assert replay["instance_digest"] == record.instance_digest
    assert replay["seed"] == record.seed
    replayed = RunRecord.model_validate(replay).model_dump_json(include={"outputs"})
    assert replayed == record.model_dump_json(include={"outputs"})
