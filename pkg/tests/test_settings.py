"""Tests for persistent settings and logging setup."""

import json
import logging
from pathlib import Path

import pytest

from bialg.settings import (
    Settings,
    get_settings,
    get_settings_manager,
    reset_settings_manager,
    save_settings,
)


class TestSettings:
    def test_defaults(self) -> None:
        settings = Settings()
        assert settings.arithmetic.default_field == "Q"
        assert settings.arithmetic.max_dimension == 8
        assert settings.search.budget == 2**21
        assert settings.checks.default_theta == "1"
        assert settings.checks.lambda_sweep == ["1", "-1"]
        assert settings.output.overwrite_policy == "unique"

    def test_paths_follow_appdirs(self, isolated_settings: Path) -> None:
        manager = get_settings_manager()
        assert manager.config_dir == isolated_settings
        assert manager.settings_path == isolated_settings / "settings.json"

    def test_save_and_reload(self, isolated_settings: Path) -> None:
        settings = get_settings()
        settings.search.budget = 99
        settings.checks.lambda_sweep = ["2"]
        save_settings(settings)

        reset_settings_manager()
        reloaded = get_settings()
        assert reloaded.search.budget == 99
        assert reloaded.checks.lambda_sweep == ["2"]

    def test_backup_on_second_save(self, isolated_settings: Path) -> None:
        save_settings(get_settings())
        save_settings(get_settings())
        assert (isolated_settings / "settings.json.bak").exists()

    def test_partial_file(self, isolated_settings: Path) -> None:
        isolated_settings.mkdir(parents=True)
        (isolated_settings / "settings.json").write_text(
            json.dumps({"search": {"max_workers": 2}}), encoding="utf-8"
        )
        reset_settings_manager()
        settings = get_settings()
        assert settings.search.max_workers == 2
        assert settings.search.chunk_size == 1024
        assert settings.checks.default_theta == "1"

    def test_corrupt_file_falls_back(self, isolated_settings: Path) -> None:
        isolated_settings.mkdir(parents=True)
        (isolated_settings / "settings.json").write_text("{not json", encoding="utf-8")
        reset_settings_manager()
        assert get_settings() == Settings()

    def test_unknown_key_falls_back(self, isolated_settings: Path) -> None:
        isolated_settings.mkdir(parents=True)
        (isolated_settings / "settings.json").write_text(
            json.dumps({"search": {"depth": 3}}), encoding="utf-8"
        )
        reset_settings_manager()
        assert get_settings().search.budget == 2**21

    @pytest.mark.parametrize(
        "group, values",
        [
            ("output", {"overwrite_policy": "merge"}),
            ("arithmetic", {"default_field": "F4"}),
            ("checks", {"default_theta": "x"}),
            ("checks", {"lambda_sweep": ["1", "1/0"]}),
            ("search", {"budget": -1}),
        ],
    )
    def test_invalid_values_fall_back(self, isolated_settings: Path, group: str, values: dict) -> None:
        isolated_settings.mkdir(parents=True)
        (isolated_settings / "settings.json").write_text(json.dumps({group: values}), encoding="utf-8")
        reset_settings_manager()
        assert get_settings() == Settings()

class TestLogging:
    def test_setup_and_teardown(self) -> None:
        manager = get_settings_manager()
        root = logging.getLogger()
        before = list(root.handlers)
        manager.setup_logging("DEBUG")
        manager.setup_logging("INFO")
        added = [h for h in root.handlers if h not in before]
        assert len(added) == 2
        assert manager.get_log_file_path().exists()
        manager.teardown_logging()
        assert [h for h in root.handlers if h not in before] == []
