"""
Environment-based configuration for demand valuation runs.

Every field of ``Settings`` is read from ``DEMANDVALUE_<FIELD>``; a ``.env``
file in the working directory is honoured when python-dotenv is installed.
"""

import os
from collections.abc import Callable
from dataclasses import dataclass, fields
from typing import Any

from demandvalue.errors import ConfigError

try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass

ENV_PREFIX = "DEMANDVALUE_"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
LOG_FORMATS = ("json", "human")

# exact Shapley beyond 2^30 evaluations is never sensible
MAX_EXACT_LIMIT = 30


def _parse_bool(raw: str) -> bool:
    return raw.strip().lower() in ("1", "true", "yes", "on")


_PARSERS: dict[Any, Callable[[str], Any]] = {
    bool: _parse_bool,
    int: int,
    float: float,
    str: str.strip,
}


@dataclass(frozen=True)
class Settings:
    """Process-wide settings; run configs override the run-level ones."""

    env: str = "dev"
    debug: bool = False

    log_level: str = "INFO"
    log_format: str = "json"

    exact_limit: int = 20
    workers: int = 1
    mc_max_permutations: int = 2000
    progress_every: int = 4096

    accuracy_floor: float = 0.60

    output_dir: str = "results"

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Create settings from ``DEMANDVALUE_*`` variables.

        Unset variables keep the field default.

        Raises:
            ConfigError: If a variable cannot be parsed as its field type
        """
        values: dict[str, Any] = {}
        for f in fields(cls):
            name = ENV_PREFIX + f.name.upper()
            raw = os.getenv(name)
            if raw is None:
                continue
            try:
                values[f.name] = _PARSERS[f.type](raw)
            except ValueError as e:
                expected = getattr(f.type, "__name__", str(f.type))
                raise ConfigError(
                    f"Invalid value for {name}: {raw!r}", {"variable": name, "expected": expected}
                ) from e
        return cls(**values)

    def validate(self) -> None:
        """
        Check value ranges.

        Raises:
            ConfigError: On the first out-of-range setting
        """
        checks = [
            (self.log_level in LOG_LEVELS, f"Invalid log level: {self.log_level}"),
            (self.log_format in LOG_FORMATS, f"Invalid log format: {self.log_format}"),
            (1 <= self.exact_limit <= MAX_EXACT_LIMIT, f"Invalid exact limit: {self.exact_limit}"),
            (self.workers >= 1, f"Invalid worker count: {self.workers}"),
            (self.mc_max_permutations >= 1, f"Invalid MC permutation cap: {self.mc_max_permutations}"),
            (self.progress_every >= 1, f"Invalid progress interval: {self.progress_every}"),
            (0.0 <= self.accuracy_floor <= 1.0, f"Invalid accuracy floor: {self.accuracy_floor}"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message, {"env": self.env})

    def run_defaults(self) -> dict[str, Any]:
        """Run config values that fall back to the environment."""
        return {"workers": self.workers, "out": self.output_dir}


_settings: Settings | None = None


def get_settings(reload: bool = False) -> Settings:
    """Get the global settings instance.

    Args:
        reload: Force reload settings from environment variables
    """
    global _settings
    if _settings is None or reload:
        _settings = Settings.from_env()
        _settings.validate()
    return _settings


def initialize_settings(settings: Settings | None) -> None:
    """Replace the global settings (tests pass None to force a reload)."""
    global _settings
    _settings = settings
