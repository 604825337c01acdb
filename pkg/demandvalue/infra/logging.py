"""
Structured logging for demand valuation runs.

Records carry the run id and command from context variables plus any of the
valuation fields in ``CONTEXT_FIELDS``. Logs go to stderr so stdout stays free
for command output.
"""

import json
import logging
import sys
from contextvars import ContextVar
from datetime import datetime, timezone
from typing import Any

run_id: ContextVar[str | None] = ContextVar("run_id", default=None)
command: ContextVar[str | None] = ContextVar("command", default=None)

CONTEXT_FIELDS = ("algorithm", "zone", "tte", "evaluations", "elapsed_ms")

# Chatty third-party loggers kept at WARNING
QUIET_LOGGERS = ("joblib",)


def _record_context(record: logging.LogRecord) -> dict[str, Any]:
    context: dict[str, Any] = {}
    if run := run_id.get():
        context["run_id"] = run
    if cmd := command.get():
        context["command"] = cmd
    for name in CONTEXT_FIELDS:
        if hasattr(record, name):
            context[name] = getattr(record, name)
    return context


class JSONFormatter(logging.Formatter):
    """One JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        created = datetime.fromtimestamp(record.created, tz=timezone.utc)
        entry: dict[str, Any] = {
            "ts": created.isoformat(timespec="milliseconds").replace("+00:00", "Z"),
            "level": record.levelname,
            "msg": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
            **_record_context(record),
        }
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


class HumanFormatter(logging.Formatter):
    """Single-line format for debugging at a terminal."""

    LABELS = {"run_id": "run", "command": "cmd"}

    def format(self, record: logging.LogRecord) -> str:
        clock = datetime.fromtimestamp(record.created).strftime("%H:%M:%S.%f")[:-3]
        parts = [f"[{clock}] {record.levelname:8} {record.module}:{record.lineno} - {record.getMessage()}"]
        for key, value in _record_context(record).items():
            if key == "run_id":
                value = str(value)[:8]
            parts.append(f"[{self.LABELS.get(key, key)}:{value}]")
        line = " ".join(parts)
        if record.exc_info:
            line += "\n" + self.formatException(record.exc_info)
        return line


FORMATTERS: dict[str, type[logging.Formatter]] = {
    "json": JSONFormatter,
    "human": HumanFormatter,
}


def setup_logging(level: str = "INFO", format_type: str = "json", debug: bool = False) -> None:
    """Configure the root logger.

    Args:
        level: Log level name
        format_type: Key of ``FORMATTERS``
        debug: Force DEBUG level with the human format
    """
    if debug:
        level, format_type = "DEBUG", "human"

    root = logging.getLogger()
    root.setLevel(level.upper())
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(FORMATTERS[format_type]())
    root.addHandler(handler)

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def set_run_context(run_id_val: str | None = None, command_val: str | None = None) -> None:
    """Bind the run id and command to the current context."""
    if run_id_val:
        run_id.set(run_id_val)
    if command_val:
        command.set(command_val)


def clear_run_context() -> None:
    run_id.set(None)
    command.set(None)


def log_with_context(logger: logging.Logger, level: str, message: str, **fields: Any) -> None:
    """
    Log ``message`` with valuation fields attached to the record.

    Fields whose value is None are left off; zero counts are kept.
    """
    extra = {key: value for key, value in fields.items() if value is not None}
    logger.log(getattr(logging, level.upper()), message, extra=extra)
