"""Process-level configuration for LTC Prune.

Centralized settings - never use os.environ directly in other files. Run parameters
(testbeds, training, pruning) live in TOML config files, see ``schemas.RunConfig``.
"""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = 1


@dataclass
class Settings:
    """Settings for the ltc-prune command line."""

    log_level: str = field(default_factory=lambda: os.getenv("LTC_PRUNE_LOG_LEVEL", "INFO").upper())

    # Default output root when --out is not given
    output_root: Path = field(default_factory=lambda: Path(os.getenv("LTC_PRUNE_OUT", "runs")))

    # Float formatting for CSV artifacts (17 significant digits round-trips doubles)
    float_format: str = "%.17g"

    schema_version: int = SCHEMA_VERSION

    def validate(self) -> list[str]:
        """Validate settings and return list of errors."""
        errors = []

        if logging.getLevelName(self.log_level) == f"Level {self.log_level}":
            errors.append(f"LTC_PRUNE_LOG_LEVEL is not a logging level: {self.log_level}")
        if self.output_root.exists() and not self.output_root.is_dir():
            errors.append(f"LTC_PRUNE_OUT is not a directory: {self.output_root}")

        return errors

    @classmethod
    def from_env(cls) -> "Settings":
        """Create settings from environment variables."""
        return cls()


# Global settings instance
settings = Settings.from_env()
