"""Configuration settings for the plus-edge toolkit."""
import os
from pathlib import Path
from typing import Dict, List
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, str(default)))
    except ValueError:
        return -1


def _env_float(name: str, default: float) -> float:
    try:
        return float(os.getenv(name, str(default)))
    except ValueError:
        return -1.0


class Config:
    """Application configuration."""

    # Logging
    LOG_LEVEL = os.getenv("PLUSKIT_LOG_LEVEL", "INFO").upper()
    LOG_DIR = Path(os.getenv("PLUSKIT_LOG_DIR", "logs"))
    RESULTS_FILE = Path(os.getenv("PLUSKIT_RESULTS", str(LOG_DIR / "runs.jsonl")))

    # Worker pool (sweep cells, oracle enumeration blocks)
    WORKERS = _env_int("PLUSKIT_WORKERS", 1)

    # Oracle caps
    SPECTRUM_CAP = _env_int("PLUSKIT_SPECTRUM_CAP", 10)
    HAMILTONIAN_CAP = _env_int("PLUSKIT_HAMILTONIAN_CAP", 11)
    TRIANGLE_CAP = _env_int("PLUSKIT_TRIANGLE_CAP", 12)

    # Numerics
    TOLERANCE = _env_float("PLUSKIT_TOLERANCE", 1e-9)
    GRID_TOLERANCE = _env_float("PLUSKIT_GRID_TOLERANCE", 1e-6)
    GRID_POINTS = _env_int("PLUSKIT_GRID_POINTS", 601)

    # Local search
    PATH_START = os.getenv("PLUSKIT_START", "greedy").lower()

    # Server Settings
    HOST = os.getenv("HOST", "0.0.0.0")
    PORT = _env_int("PORT", 8000)

    LOG_LEVELS = ("DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR")

    @classmethod
    def validate_settings(cls) -> Dict[str, bool]:
        """Validate the settings read from the environment."""
        return {
            "PLUSKIT_LOG_LEVEL": cls.LOG_LEVEL in cls.LOG_LEVELS,
            "PLUSKIT_WORKERS": cls.WORKERS >= 1,
            "PLUSKIT_SPECTRUM_CAP": cls.SPECTRUM_CAP >= 1,
            "PLUSKIT_HAMILTONIAN_CAP": cls.HAMILTONIAN_CAP >= 3,
            "PLUSKIT_TRIANGLE_CAP": cls.TRIANGLE_CAP >= 3,
            "PLUSKIT_TOLERANCE": 0 < cls.TOLERANCE < 1,
            "PLUSKIT_GRID_TOLERANCE": 0 < cls.GRID_TOLERANCE < 1,
            "PLUSKIT_GRID_POINTS": cls.GRID_POINTS >= 11,
            "PLUSKIT_START": cls.PATH_START in ("greedy", "empty"),
            "PORT": 0 < cls.PORT < 65536,
        }

    @classmethod
    def get_invalid_settings(cls) -> List[str]:
        """Get list of settings that failed validation."""
        validation = cls.validate_settings()
        return [key for key, is_valid in validation.items() if not is_valid]
