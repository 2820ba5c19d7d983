"""Run records: content digests, append-only JSONL and the sweep CSV."""
from __future__ import annotations

import csv
import hashlib
import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from pydantic import BaseModel, Field

from src.config import Config
from src.core import Pattern, SignedCompleteGraph

CSV_COLUMNS = ("n", "d", "delta", "seed", "metric", "bound", "ratio", "pass")


class RunRecord(BaseModel):
    """One self-describing run; replaying command + digest + seed reproduces ``outputs``."""

    command: str
    instance_digest: str
    seed: Optional[int] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    outputs: Dict[str, Any] = Field(default_factory=dict)
    runtime_ms: int = 0
    timestamp: str = Field(default_factory=lambda: datetime.now().isoformat())


def instance_digest(host: SignedCompleteGraph, pattern: Optional[Pattern] = None) -> str:
    """sha256 of the canonical JSON form; independent of field and edge order in files."""
    canonical: Dict[str, Any] = {
        "n": host.n,
        "plus_edges": [list(e) for e in host.sorted_plus_edges()],
    }
    if pattern is not None:
        canonical["pattern"] = {"n": pattern.n, "edges": [list(e) for e in pattern.sorted_edges()]}
    text = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def append_record(record: RunRecord, path: Union[str, Path, None] = None) -> Path:
    target = Path(path) if path else Config.RESULTS_FILE
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "a", encoding="utf-8") as f:
        f.write(record.model_dump_json() + "\n")
    return target


def read_records(path: Union[str, Path, None] = None) -> List[RunRecord]:
    source = Path(path) if path else Config.RESULTS_FILE
    if not source.exists():
        return []
    with open(source, "r", encoding="utf-8") as f:
        return [RunRecord.model_validate_json(line) for line in f if line.strip()]


def write_summary_csv(rows: Iterable[Dict[str, Any]], path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return target


def summarize(path: Union[str, Path, None] = None) -> Dict[str, Any]:
    """Per-command run counts, certificate pass rate and mean metric/bound ratio."""
    summary: Dict[str, Any] = {}
    for record in read_records(path):
        entry = summary.setdefault(record.command, {"runs": 0, "passed": 0, "ratios": []})
        entry["runs"] += 1
        if record.outputs.get("certificate_pass"):
            entry["passed"] += 1
        bound, metric = record.outputs.get("bound_value"), record.outputs.get("m_plus")
        if bound and metric is not None and bound > 0:
            entry["ratios"].append(metric / bound)
    for entry in summary.values():
        ratios = entry.pop("ratios")
        entry["pass_rate"] = entry["passed"] / entry["runs"]
        entry["mean_ratio"] = sum(ratios) / len(ratios) if ratios else None
    return summary
