"""
Demand Value Error Types

Typed exceptions for consistent error handling across library and CLI.
"""

from typing import Any


class DemandValueError(Exception):
    """Base exception for all demand-valuation errors."""

    exit_code = 1

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        """Machine-readable form written to stderr by the CLI."""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


class ConfigError(DemandValueError):
    """Configuration-related errors."""

    exit_code = 2


class InvalidInputError(DemandValueError):
    """Precondition violations on library calls."""

    exit_code = 2


class CoalitionRangeError(InvalidInputError):
    """Coalition member index outside the player set."""

    pass


class DataError(DemandValueError):
    """Unreadable or unusable input data."""

    exit_code = 3


class UntrainableCoalitionError(DataError):
    """Forecaster received a training window with no demand."""

    pass


class InfeasibleError(DemandValueError):
    """Requested computation cannot be carried out as configured."""

    exit_code = 4
