"""
Exceptions raised by the recovery pipelines and the experiment harness.

Value-level precondition failures use ValueError; the classes below mark
failures the CLI maps to dedicated exit codes.
"""

from typing import Optional


class RecoveryError(Exception):
    """Base class for pipeline failures (CLI exit code 1)."""


class ConvergenceError(RecoveryError):
    """Iterative eigensolver hit its iteration cap."""

    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class RankDeficientError(RecoveryError):
    """Fewer nonzero singular values than requested."""


class SelectionError(RecoveryError):
    """Greedy candidate selection found fewer than k compatible sets."""

    def __init__(self, message: str, accepted: int, required: int):
        super().__init__(message)
        self.accepted = accepted
        self.required = required


class ConfigError(Exception):
    """Invalid experiment configuration (CLI exit code 2)."""

    def __init__(
        self,
        message: str,
        section: Optional[str] = None,
        field: Optional[str] = None,
        line: Optional[int] = None
    ):
        self.section = section
        self.field = field
        self.line = line
        location = ''
        if section and field:
            location = f"[{section}] {field}"
        elif section:
            location = f"[{section}]"
        if line is not None:
            location = f"{location} (line {line})" if location else f"line {line}"
        super().__init__(f"{location}: {message}" if location else message)
