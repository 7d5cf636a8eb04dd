"""
Configuration loading for troptrans.
Settings come from built-in defaults, then config.json, then a .env file, then the environment.
"""

import json
import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from algebra.transients import DEFAULT_MATRIX_CAP

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

ENV_VARS = {
    "threads": "TROPTRANS_THREADS",
    "data_dir": "TROPTRANS_DATA_DIR",
    "float_tolerance": "TROPTRANS_FLOAT_TOLERANCE",
    "log_level": "TROPTRANS_LOG_LEVEL",
    "matrix_cap": "TROPTRANS_MATRIX_CAP",
}


class Settings(BaseModel):
    """Runtime settings shared by the CLI and the harness."""

    threads: int = Field(default=1, ge=1)
    data_dir: str = Field(default_factory=lambda: os.path.join(PROJECT_ROOT, "data"))
    float_tolerance: float = Field(default=1e-9, gt=0.0)
    log_level: str = "WARNING"
    matrix_cap: int = Field(default=DEFAULT_MATRIX_CAP, ge=1)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level {value!r}; choose from {', '.join(LOG_LEVELS)}")
        return level


def _resolve_config_path(config_path: Optional[str]) -> Optional[str]:
    if config_path is None:
        default_path = os.path.join(PROJECT_ROOT, "config.json")
        return default_path if os.path.exists(default_path) else None
    if not os.path.isabs(config_path) and not os.path.exists(config_path):
        # Relative paths that miss in the working directory are tried against the project root
        project_config_path = os.path.join(PROJECT_ROOT, config_path)
        if os.path.exists(project_config_path):
            return project_config_path
    return config_path


def load_config(config_path: str = None, env_file: str = None) -> Settings:
    """
    Load settings.

    Args:
        config_path: Path to a JSON configuration file. If None, config.json at the project
                    root is used when present. Relative paths are also searched from the
                    project root.
        env_file: .env file to load; None lets python-dotenv search upwards from the
                  working directory.

    Returns:
        Validated Settings

    Raises:
        FileNotFoundError: If an explicit config_path does not exist
        ValueError: If the configuration file is not valid JSON or a value is out of range
    """
    values: Dict[str, Any] = {}
    path = _resolve_config_path(config_path)
    if path is not None:
        try:
            with open(path, 'r', encoding='utf-8') as file:
                values.update(json.load(file))
        except FileNotFoundError:
            raise FileNotFoundError(f"Configuration file {path} not found.")
        except json.JSONDecodeError:
            raise ValueError(f"Invalid JSON in configuration file {path}.")

    load_dotenv(env_file, override=False)
    for field, var in ENV_VARS.items():
        if os.environ.get(var):
            values[field] = os.environ[var]

    return Settings(**values)
