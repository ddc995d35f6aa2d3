"""Diagnostics and the common error base shared by every pipeline stage."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Severity(enum.IntEnum):
    INFO = 0
    WARNING = 1
    ERROR = 2


@dataclass(frozen=True, slots=True)
class Diagnostic:
    severity: Severity
    message: str
    line: int = 0
    col: int = 0
    file: str = ""
    code: str = ""

    def format(self, file: str | None = None) -> str:
        """Render as ``SEVERITY file:line:col message``."""
        name = file if file is not None else (self.file or "-")
        return f"{self.severity.name} {name}:{self.line}:{self.col} {self.message}"


class ChambersError(Exception):
    """Base for fatal errors raised by any stage.

    Carries an optional source position so the CLI can report
    ``file:line:col`` uniformly.
    """

    def __init__(self, message: str, line: int = 0, col: int = 0, file: str = "") -> None:
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col
        self.file = file

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(
            Severity.ERROR, f"{self.code}: {self.message}", self.line, self.col, self.file, self.code
        )


def worst(diagnostics) -> Severity | None:
    return max((d.severity for d in diagnostics), default=None)
