import pytest

from src.config import Config


@pytest.fixture(autouse=True)
def isolated_logs(tmp_path, monkeypatch):
    """Keep system.log, metrics.jsonl and run records inside the test's tmp dir."""
    monkeypatch.setattr(Config, "LOG_DIR", tmp_path / "logs")
    monkeypatch.setattr(Config, "RESULTS_FILE", tmp_path / "logs" / "runs.jsonl")
    return tmp_path
