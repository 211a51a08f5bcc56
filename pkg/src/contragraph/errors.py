"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class ContragraphError(Exception):
    """Base class for every error raised by this package."""


class ArgumentError(ContragraphError, ValueError):
    """An argument is malformed or out of range."""


class PreconditionError(ContragraphError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class SizeLimitError(ContragraphError, ValueError):
    """A requested object would exceed a configured size cap."""

    def __init__(self, message: str, *, requested: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.requested = requested
        self.cap = cap


class ResourceLimitError(ContragraphError, RuntimeError):
    """A search budget was exhausted before a verdict could be reached."""

    def __init__(self, message: str, *, partial: int | None = None):
        super().__init__(message)
        self.partial = partial


class ParseError(ContragraphError, ValueError):
    """An input file is malformed. ``position`` is a line number or offset."""

    def __init__(self, message: str, *, position: int | None = None):
        super().__init__(message if position is None else f"{message} (at {position})")
        self.position = position


class InternalError(ContragraphError, RuntimeError):
    """An internal consistency check failed."""
