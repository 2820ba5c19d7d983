"""
Simple Logging for the plus-edge toolkit
Console (stderr) + file logging, and per-run metrics.
"""
import json
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Union

from src.config import Config

_LEVEL_ORDER = {name: rank for rank, name in enumerate(Config.LOG_LEVELS)}


def _log_dir() -> Path:
    Config.LOG_DIR.mkdir(parents=True, exist_ok=True)
    return Config.LOG_DIR


def log_message(message: str, level="INFO"):
    """Simple logging function"""
    if _LEVEL_ORDER.get(level, 1) < _LEVEL_ORDER.get(Config.LOG_LEVEL, 1):
        return
    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    log_entry = f"[{timestamp}] {level}: {message}"

    # stdout carries JSON results
    print(log_entry, file=sys.stderr)

    try:
        with open(_log_dir() / "system.log", "a", encoding="utf-8") as f:
            f.write(log_entry + "\n")
    except OSError:
        pass


def log_debug(message: str):
    log_message(message, "DEBUG")


def log_error(message: str):
    """Log errors"""
    log_message(f"❌ {message}", "ERROR")


def log_success(message: str):
    """Log successes"""
    log_message(f"✅ {message}", "SUCCESS")


def log_stage_start(stage_name: str):
    """Log when a pipeline stage starts"""
    log_message(f"🤖 Starting {stage_name}")


def log_stage_complete(stage_name: str):
    """Log when a pipeline stage completes"""
    log_message(f"✅ Completed {stage_name}")


def log_move(search: str, move: str, objective):
    """Log an accepted local-search move"""
    log_debug(f"🔁 {search}: accepted {move} -> objective {objective}")


class RunMetrics:
    """Track basic metrics of one pipeline run"""

    def __init__(self):
        self.start_time = None
        self.command = ""
        self.stages_used: List[str] = []
        self.errors = 0

    def start_run(self, command: str):
        """Start tracking a run"""
        self.start_time = time.time()
        self.command = command
        self.stages_used = []
        self.errors = 0
        log_message(f"📊 Processing: {command}")

    def add_stage(self, stage_name: str):
        self.stages_used.append(stage_name)

    def add_error(self):
        self.errors += 1

    def finish_run(self, success: bool = True):
        """Finish and append the metrics line"""
        if not self.start_time:
            return

        processing_time = time.time() - self.start_time
        metrics = {
            "timestamp": datetime.now().isoformat(),
            "command": self.command,
            "processing_time": round(processing_time, 3),
            "stages_used": len(self.stages_used),
            "errors": self.errors,
            "success": success,
        }

        try:
            with open(_log_dir() / "metrics.jsonl", "a", encoding="utf-8") as f:
                f.write(json.dumps(metrics) + "\n")
        except OSError as e:
            log_error(f"Could not save metrics: {e}")

        log_message(
            f"📈 {self.command} completed in {processing_time:.2f}s | "
            f"Stages: {len(self.stages_used)} | Errors: {self.errors}"
        )


def get_simple_stats() -> Union[Dict[str, Any], str]:
    """Get basic statistics"""
    path = Config.LOG_DIR / "metrics.jsonl"
    try:
        with open(path, "r", encoding="utf-8") as f:
            metrics = [json.loads(line) for line in f if line.strip()]
    except FileNotFoundError:
        return "No metrics file found"
    except (OSError, json.JSONDecodeError) as e:
        return f"Error reading metrics: {e}"

    if not metrics:
        return "No runs processed yet"

    total = len(metrics)
    successful = sum(1 for m in metrics if m.get("success", False))
    avg_time = sum(m.get("processing_time", 0) for m in metrics) / total
    total_errors = sum(m.get("errors", 0) for m in metrics)

    return {
        "total_runs": total,
        "successful_runs": successful,
        "success_rate": f"{(successful / total) * 100:.1f}%",
        "average_time": f"{avg_time:.2f}s",
        "total_errors": total_errors,
    }
