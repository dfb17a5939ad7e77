"""
Application configuration settings using Pydantic Settings.
"""

import logging
import os

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from c3perm import __version__


def _find_env_file() -> str:
    """Find .env file dynamically based on current working directory."""
    possible_paths = [
        ".env",
        "../.env",
        "../../.env",
    ]

    for path in possible_paths:
        if os.path.exists(path):
            return path

    return ".env"


class Settings(BaseSettings):
    """Application settings configuration."""

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_file=_find_env_file(),
        extra="ignore",
    )

    # Project information
    PROJECT_NAME: str = "c3perm"
    VERSION: str = __version__

    # Logging settings
    LOG_LEVEL: str = "WARNING"

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        """Accept level names in any case; reject unknown names."""
        if v is None or v == "":
            return "WARNING"
        level = str(v).upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level {v!r}")
        return level

    # Survey settings
    SURVEY_WORKERS: int = 1
    SURVEY_SHARDS: int = 16

    # Size caps
    SEMI_CLIFFORD_MAX_QUBITS: int = 10
    DENSE_MAX_QUBITS: int = 8
    DENSE_C3_MAX_QUBITS: int = 7
    DENSE_C4_MAX_QUBITS: int = 4

    # Sampling
    RANDOM_SEED: int = 2024


# Create global settings instance
settings = Settings()
