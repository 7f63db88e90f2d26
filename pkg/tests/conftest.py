"""Shared fixtures: isolated settings directories and the shipped structure files."""

from pathlib import Path
from typing import Iterator

import appdirs
import pytest

from bialg.settings import get_settings, reset_settings_manager

STRUCTURES_DIR = Path(__file__).parent.parent / "structures"


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Iterator[Path]:
    """Point appdirs at a temporary tree and start from default settings."""
    config_dir = tmp_path / "config"
    log_dir = tmp_path / "logs"
    monkeypatch.setattr(appdirs, "user_config_dir", lambda *args, **kwargs: str(config_dir))
    monkeypatch.setattr(appdirs, "user_log_dir", lambda *args, **kwargs: str(log_dir))
    reset_settings_manager()
    get_settings().search.show_progress = False
    yield config_dir
    reset_settings_manager()


@pytest.fixture
def structures_dir() -> Path:
    return STRUCTURES_DIR
