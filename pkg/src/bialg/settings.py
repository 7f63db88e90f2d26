"""Settings management with cross-platform storage using appdirs."""

import json
import logging
from dataclasses import asdict, dataclass
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, List, Optional

import appdirs

logger = logging.getLogger(__name__)


@dataclass
class ArithmeticSettings:
    """Ground field and size limits."""

    default_field: str = "Q"
    max_dimension: int = 8


@dataclass
class SearchSettings:
    """Exhaustive search over F_p."""

    budget: int = 2**21
    max_workers: int = 4
    chunk_size: int = 1024
    show_progress: bool = True


@dataclass
class CheckSettings:
    """Axiom checking defaults."""

    default_theta: str = "1"
    verify_constructions: bool = True
    lambda_sweep: List[str] = None

    def __post_init__(self) -> None:
        """Initialize default values after dataclass creation."""
        if self.lambda_sweep is None:
            self.lambda_sweep = ["1", "-1"]


@dataclass
class OutputSettings:
    """Structure file output."""

    overwrite_policy: str = "unique"  # skip, replace, unique
    default_output_dir: str = ""


@dataclass
class Settings:
    """Application settings container."""

    arithmetic: ArithmeticSettings = None
    search: SearchSettings = None
    checks: CheckSettings = None
    output: OutputSettings = None
    logging_level: str = "WARNING"

    def __post_init__(self) -> None:
        """Initialize sub-settings if not provided."""
        if self.arithmetic is None:
            self.arithmetic = ArithmeticSettings()
        if self.search is None:
            self.search = SearchSettings()
        if self.checks is None:
            self.checks = CheckSettings()
        if self.output is None:
            self.output = OutputSettings()


class SettingsManager:
    """Manages application settings with persistent storage."""

    APP_NAME = "bialg"
    APP_AUTHOR = "bialg"
    SETTINGS_FILENAME = "settings.json"
    LOG_FILENAME = "bialg.log"

    def __init__(self) -> None:
        """Initialize settings manager."""
        self._config_dir = Path(appdirs.user_config_dir(self.APP_NAME, self.APP_AUTHOR))
        self._log_dir = Path(appdirs.user_log_dir(self.APP_NAME, self.APP_AUTHOR))

        self._settings_path = self._config_dir / self.SETTINGS_FILENAME
        self._settings: Optional[Settings] = None
        self._handlers: List[logging.Handler] = []

    def _ensure_directory(self, directory: Path) -> bool:
        try:
            directory.mkdir(parents=True, exist_ok=True)
            return True
        except OSError as e:
            logger.warning(f"Failed to create directory {directory}: {e}")
            return False

    @property
    def config_dir(self) -> Path:
        """Get configuration directory path."""
        return self._config_dir

    @property
    def log_dir(self) -> Path:
        """Get log directory path."""
        return self._log_dir

    @property
    def settings_path(self) -> Path:
        return self._settings_path

    def load_settings(self) -> Settings:
        """Load settings from file or return defaults."""
        if self._settings is not None:
            return self._settings

        if not self._settings_path.exists():
            logger.debug("Settings file not found, using defaults")
            self._settings = Settings()
            return self._settings

        try:
            with open(self._settings_path, "r", encoding="utf-8") as f:
                data = json.load(f)

            self._settings = self._validate(self._deserialize_settings(data))
            logger.info(f"Loaded settings from {self._settings_path}")

        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            logger.warning(f"Failed to load settings: {e}, using defaults")
            self._settings = Settings()

        return self._settings

    def save_settings(self, settings: Optional[Settings] = None) -> None:
        """Save settings to file."""
        if settings is not None:
            self._settings = settings

        if self._settings is None:
            logger.warning("No settings to save")
            return

        if not self._ensure_directory(self._config_dir):
            return

        try:
            data = self._serialize_settings(self._settings)

            # Keep the previous file as a backup
            if self._settings_path.exists():
                backup_path = self._settings_path.with_suffix(".json.bak")
                self._settings_path.replace(backup_path)

            with open(self._settings_path, "w", encoding="utf-8") as f:
                json.dump(data, f, indent=2, ensure_ascii=False)

            logger.info(f"Saved settings to {self._settings_path}")

        except (OSError, ValueError) as e:
            logger.error(f"Failed to save settings: {e}")

    def _serialize_settings(self, settings: Settings) -> Dict[str, Any]:
        """Convert settings to JSON-serializable dictionary."""
        return {
            "arithmetic": asdict(settings.arithmetic),
            "search": asdict(settings.search),
            "checks": asdict(settings.checks),
            "output": asdict(settings.output),
            "logging_level": settings.logging_level,
        }

    def _deserialize_settings(self, data: Dict[str, Any]) -> Settings:
        """Convert dictionary to Settings object."""
        return Settings(
            arithmetic=ArithmeticSettings(**data.get("arithmetic", {})),
            search=SearchSettings(**data.get("search", {})),
            checks=CheckSettings(**data.get("checks", {})),
            output=OutputSettings(**data.get("output", {})),
            logging_level=data.get("logging_level", "WARNING"),
        )

    def _validate(self, settings: Settings) -> Settings:
        """Reject values no command can run with."""
        from .fsutils import OverwritePolicy
        from .scalars import RATIONALS, Field, FieldError

        try:
            fld = Field.parse(settings.arithmetic.default_field)
            fld.parse_scalar(settings.checks.default_theta)
            for value in settings.checks.lambda_sweep:
                RATIONALS.parse_scalar(value)
        except FieldError as e:
            raise ValueError(e.message) from e
        if settings.output.overwrite_policy not in (
            OverwritePolicy.SKIP,
            OverwritePolicy.REPLACE,
            OverwritePolicy.UNIQUE,
        ):
            raise ValueError(f"Unknown overwrite policy: {settings.output.overwrite_policy}")
        if settings.arithmetic.max_dimension < 1 or settings.search.budget < 0:
            raise ValueError("max_dimension must be positive and budget non-negative")
        return settings

    def get_log_file_path(self) -> Path:
        """Get path for application log file."""
        return self._log_dir / self.LOG_FILENAME

    def teardown_logging(self) -> None:
        """Remove the handlers installed by setup_logging."""
        root_logger = logging.getLogger()
        for handler in self._handlers:
            root_logger.removeHandler(handler)
            handler.close()
        self._handlers = []

    def setup_logging(self, level: Optional[str] = None) -> None:
        """Setup application logging configuration."""
        if level is None and self._settings:
            level = self._settings.logging_level

        log_level = getattr(logging, (level or "WARNING").upper(), logging.WARNING)

        self.teardown_logging()
        root_logger = logging.getLogger()

        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )

        # Console handler goes to stderr so reports on stdout stay clean
        console_handler = logging.StreamHandler()
        console_handler.setLevel(log_level)
        console_handler.setFormatter(formatter)
        self._handlers.append(console_handler)

        if self._ensure_directory(self._log_dir):
            try:
                file_handler = RotatingFileHandler(
                    self.get_log_file_path(),
                    maxBytes=10 * 1024 * 1024,  # 10MB
                    backupCount=5,
                )
                file_handler.setLevel(log_level)
                file_handler.setFormatter(formatter)
                self._handlers.append(file_handler)
            except OSError as e:
                logger.warning(f"File logging disabled: {e}")

        root_logger.setLevel(log_level)
        for handler in self._handlers:
            root_logger.addHandler(handler)

        logger.info(f"Logging configured at {logging.getLevelName(log_level)} level")


# Global settings manager instance
_settings_manager: Optional[SettingsManager] = None


def get_settings_manager() -> SettingsManager:
    """Get global settings manager instance."""
    global _settings_manager
    if _settings_manager is None:
        _settings_manager = SettingsManager()
    return _settings_manager


def get_settings() -> Settings:
    """Get current application settings."""
    return get_settings_manager().load_settings()


def save_settings(settings: Settings) -> None:
    """Save application settings."""
    get_settings_manager().save_settings(settings)


def reset_settings_manager() -> None:
    """Drop the global manager so the next access re-reads appdirs paths."""
    global _settings_manager
    if _settings_manager is not None:
        _settings_manager.teardown_logging()
    _settings_manager = None
