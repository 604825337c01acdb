"""
Run configuration loading.

Run configs are flat YAML or JSON documents. Values resolve flag > file >
default, and manifests written by the CLI load back as configs.
"""

import json
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from demandvalue.errors import ConfigError
from demandvalue.schemas import RunConfig


class ConfigLoader:
    """Loads run config files and named presets."""

    def __init__(self, config_dir: str | Path = "config"):
        """
        Initialize the loader.

        Args:
            config_dir: Directory holding ``<name>.yaml`` presets
        """
        self.config_dir = Path(config_dir)
        self._files: dict[Path, dict[str, Any]] = {}

    def load_file(self, path: str | Path) -> dict[str, Any]:
        """
        Read a YAML or JSON config document.

        Manifests nest the config under ``config``; that block is returned.

        Raises:
            ConfigError: If the file is missing, malformed or not a mapping
        """
        path = Path(path)
        if path in self._files:
            return self._files[path]
        if not path.is_file():
            raise ConfigError(f"Configuration file not found: {path}")

        try:
            with open(path, encoding="utf-8") as f:
                if path.suffix == ".json":
                    data = json.load(f)
                else:
                    data = yaml.safe_load(f)
        except (yaml.YAMLError, json.JSONDecodeError) as e:
            raise ConfigError(f"Error parsing config file {path}: {e}") from e

        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must hold a mapping")
        if isinstance(data.get("config"), dict):
            data = data["config"]

        self._files[path] = data
        return data

    def load_preset(self, name: str) -> dict[str, Any]:
        """Load ``config/<name>.yaml``."""
        return self.load_file(self.config_dir / f"{name}.yaml")

    def _load_source(self, path: str | Path) -> dict[str, Any]:
        """A file path, or a bare preset name such as ``synthetic_demo``."""
        candidate = Path(path)
        is_name = not candidate.suffix and len(candidate.parts) == 1
        if is_name and not candidate.is_file():
            return self.load_preset(str(path))
        return self.load_file(candidate)

    def resolve(
        self,
        path: str | Path | None = None,
        overrides: dict[str, Any] | None = None,
        defaults: dict[str, Any] | None = None,
    ) -> RunConfig:
        """
        Merge defaults, the optional file and explicit overrides.

        Args:
            path: Config file, manifest or preset name
            overrides: Values given on the command line (None entries ignored)
            defaults: Values below the file, e.g. from environment settings

        Raises:
            ConfigError: If the merged values do not form a valid RunConfig
        """
        values: dict[str, Any] = dict(defaults or {})
        if path:
            values.update(self._load_source(path))
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        try:
            return RunConfig.model_validate(values)
        except ValidationError as e:
            problems = [
                {"field": ".".join(str(p) for p in err["loc"]) or "config", "problem": err["msg"]}
                for err in e.errors()
            ]
            raise ConfigError("Invalid run configuration", {"errors": problems}) from e
