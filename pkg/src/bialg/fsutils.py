"""Filesystem utilities for structure files: naming, overwrite policy and directory scans."""

import os
import re
from pathlib import Path
from typing import List


class ValidationError(Exception):
    """Raised when file or path validation fails."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


class PathUtils:
    """Utilities for path manipulation and validation."""

    INVALID_FILENAME_CHARS = r'[<>:"/\\|?*\x00-\x1f\s]'
    MAX_FILENAME_LENGTH = 255

    @classmethod
    def sanitize_filename(cls, filename: str) -> str:
        """Sanitize a structure name into a filename stem."""
        sanitized = re.sub(cls.INVALID_FILENAME_CHARS, "_", filename)
        sanitized = sanitized.strip("._ ")

        if not sanitized:
            sanitized = "structure"

        if len(sanitized) > cls.MAX_FILENAME_LENGTH:
            name, ext = os.path.splitext(sanitized)
            sanitized = name[: cls.MAX_FILENAME_LENGTH - len(ext)] + ext

        return sanitized

    @classmethod
    def get_unique_filename(cls, directory: Path, base_name: str, extension: str) -> Path:
        """Generate unique filename by appending numbers if file exists."""
        base_name = cls.sanitize_filename(base_name)

        candidate = directory / f"{base_name}{extension}"
        if not candidate.exists():
            return candidate

        counter = 1
        while counter <= 9999:
            candidate = directory / f"{base_name}_{counter}{extension}"
            if not candidate.exists():
                return candidate
            counter += 1

        raise ValidationError(f"Could not generate unique filename for {base_name}")


class OverwritePolicy:
    """Handle file overwrite policies."""

    SKIP = "skip"
    REPLACE = "replace"
    UNIQUE = "unique"

    @classmethod
    def resolve_output_path(cls, output_path: Path, policy: str = UNIQUE) -> tuple[Path, bool]:
        """
        Resolve output path based on overwrite policy.

        Returns:
            Tuple of (resolved_path, should_skip)
        """
        if policy == cls.SKIP:
            return output_path, output_path.exists()

        elif policy == cls.REPLACE:
            return output_path, False

        elif policy == cls.UNIQUE:
            if not output_path.exists():
                return output_path, False
            unique_path = PathUtils.get_unique_filename(
                output_path.parent, output_path.stem, output_path.suffix
            )
            return unique_path, False

        else:
            raise ValidationError(f"Unknown overwrite policy: {policy}")


def ensure_directory_exists(directory: Path) -> None:
    """Ensure directory exists, creating it if necessary."""
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ValidationError(f"Failed to create directory {directory}: {str(e)}")


def scan_structure_files(directory: Path, recursive: bool = False) -> List[Path]:
    """List structure files (*.json) under a directory, skipping hidden ones."""
    if not directory.is_dir():
        raise ValidationError(f"Not a directory: {directory}")

    pattern = "**/*.json" if recursive else "*.json"
    try:
        files = [
            path
            for path in directory.glob(pattern)
            if path.is_file() and not any(part.startswith(".") for part in path.relative_to(directory).parts)
        ]
    except OSError as e:
        raise ValidationError(f"Failed to scan directory {directory}: {str(e)}")

    return sorted(files)
