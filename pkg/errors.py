"""
Exception hierarchy for the fuel moisture toolkit.

Every error raised on purpose by the library derives from FmdaError, so the
CLI can map it to an exit code without catching unrelated bugs.
"""
from typing import Optional


class FmdaError(Exception):
    """Base class for all toolkit errors."""
    pass


class DomainError(FmdaError, ValueError):
    """A value lies outside the domain an operation accepts."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class ConfigError(DomainError):
    """Invalid configuration field (scenario JSON, CLI overrides)."""
    pass


class CsvFormatError(DomainError):
    """Malformed CSV content; carries the 1-based file line (header is line 1)."""

    def __init__(self, message: str, line: Optional[int] = None,
                 field: Optional[str] = None):
        self.line = line
        if field:
            message = f"{field}: {message}"
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.field = field


class TrainingError(FmdaError):
    """Training produced non-finite weights or losses."""
    pass
