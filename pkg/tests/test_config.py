"""
Tests for application settings.
"""

import pytest
from pydantic import ValidationError

from c3perm import __version__
from c3perm.core.config import Settings


def test_defaults():
    config = Settings(_env_file=None)
    assert config.PROJECT_NAME == "c3perm"
    assert config.VERSION == __version__
    assert config.SURVEY_SHARDS == 16
    assert config.DENSE_C4_MAX_QUBITS == 4


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("SURVEY_WORKERS", "4")
    monkeypatch.setenv("LOG_LEVEL", "debug")
    config = Settings(_env_file=None)
    assert config.SURVEY_WORKERS == 4
    assert config.LOG_LEVEL == "DEBUG"


def test_log_level_validation():
    assert Settings(_env_file=None, LOG_LEVEL="").LOG_LEVEL == "WARNING"
    with pytest.raises(ValidationError):
        Settings(_env_file=None, LOG_LEVEL="chatty")
