"""
Tests for environment-based configuration.
"""

import pytest

from demandvalue.config import Settings, get_settings, initialize_settings
from demandvalue.errors import ConfigError


class TestSettings:
    """Settings defaults and environment parsing."""

    def test_default_settings(self):
        settings = Settings()

        assert settings.env == "dev"
        assert settings.debug is False
        assert settings.log_level == "INFO"
        assert settings.log_format == "json"
        assert settings.exact_limit == 20
        assert settings.workers == 1
        assert settings.mc_max_permutations == 2000
        assert settings.accuracy_floor == 0.60
        assert settings.output_dir == "results"

    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("DEMANDVALUE_ENV", "production")
        monkeypatch.setenv("DEMANDVALUE_DEBUG", "true")
        monkeypatch.setenv("DEMANDVALUE_EXACT_LIMIT", "12")
        monkeypatch.setenv("DEMANDVALUE_WORKERS", "4")
        monkeypatch.setenv("DEMANDVALUE_ACCURACY_FLOOR", "0.5")
        monkeypatch.setenv("DEMANDVALUE_OUTPUT_DIR", " out/runs ")

        settings = Settings.from_env()

        assert settings.env == "production"
        assert settings.debug is True
        assert settings.exact_limit == 12
        assert settings.workers == 4
        assert settings.accuracy_floor == 0.5
        assert settings.output_dir == "out/runs"

    def test_unset_variables_keep_defaults(self, monkeypatch):
        monkeypatch.delenv("DEMANDVALUE_PROGRESS_EVERY", raising=False)
        monkeypatch.setenv("DEMANDVALUE_DEBUG", "0")

        settings = Settings.from_env()

        assert settings.progress_every == 4096
        assert settings.debug is False

    def test_unparseable_variable(self, monkeypatch):
        monkeypatch.setenv("DEMANDVALUE_WORKERS", "many")

        with pytest.raises(ConfigError, match="DEMANDVALUE_WORKERS") as info:
            Settings.from_env()

        assert info.value.details["expected"] == "int"
        assert info.value.exit_code == 2

    def test_run_defaults(self):
        assert Settings(workers=3, output_dir="x").run_defaults() == {"workers": 3, "out": "x"}

    def test_validation_valid(self):
        Settings(log_level="DEBUG", log_format="human", exact_limit=16).validate()

    @pytest.mark.parametrize(
        "kwargs,message",
        [
            ({"log_level": "INVALID"}, "Invalid log level"),
            ({"log_format": "xml"}, "Invalid log format"),
            ({"exact_limit": 0}, "Invalid exact limit"),
            ({"exact_limit": 31}, "Invalid exact limit"),
            ({"workers": 0}, "Invalid worker count"),
            ({"mc_max_permutations": 0}, "Invalid MC permutation cap"),
            ({"progress_every": 0}, "Invalid progress interval"),
            ({"accuracy_floor": 1.5}, "Invalid accuracy floor"),
        ],
    )
    def test_validation_rejects(self, kwargs, message):
        with pytest.raises(ConfigError, match=message):
            Settings(**kwargs).validate()


class TestGlobalSettings:
    """The process-wide settings instance."""

    def teardown_method(self):
        initialize_settings(None)

    def test_get_settings_caches(self):
        initialize_settings(None)
        assert get_settings() is get_settings()

    def test_initialize_settings(self):
        custom = Settings(exact_limit=5)
        initialize_settings(custom)

        assert get_settings() is custom

    def test_reload_reads_environment(self, monkeypatch):
        initialize_settings(Settings(exact_limit=5))
        monkeypatch.setenv("DEMANDVALUE_EXACT_LIMIT", "7")

        assert get_settings(reload=True).exact_limit == 7

    def test_reload_validates(self, monkeypatch):
        monkeypatch.setenv("DEMANDVALUE_LOG_FORMAT", "xml")

        with pytest.raises(ConfigError, match="Invalid log format"):
            get_settings(reload=True)
