from pathlib import Path

import pytest

from backend.core import constants
from backend.core.config import load_settings


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("ORIGAMI_JOBS", "ORIGAMI_CACHE_DIR", "ORIGAMI_MAX_SURFACES", "ORIGAMI_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr("backend.core.config.load_dotenv", lambda: False)


def test_defaults():
    settings = load_settings()
    assert settings.jobs == constants.DEFAULT_JOBS
    assert settings.cache_dir is None
    assert settings.max_surfaces == constants.DEFAULT_MAX_SURFACES
    assert settings.log_level == constants.DEFAULT_LOG_LEVEL


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("ORIGAMI_JOBS", "3")
    monkeypatch.setenv("ORIGAMI_CACHE_DIR", str(tmp_path))
    monkeypatch.setenv("ORIGAMI_MAX_SURFACES", "500")
    monkeypatch.setenv("ORIGAMI_LOG_LEVEL", "info")
    settings = load_settings()
    assert settings.jobs == 3
    assert settings.cache_dir == Path(tmp_path)
    assert settings.max_surfaces == 500
    assert settings.log_level == "INFO"


@pytest.mark.parametrize("name, value", [
    ("ORIGAMI_JOBS", "many"),
    ("ORIGAMI_MAX_SURFACES", "0"),
    ("ORIGAMI_LOG_LEVEL", "LOUD"),
])
def test_malformed_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValueError):
        load_settings()
