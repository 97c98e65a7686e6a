"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GroupoidalError(Exception):
    """Base class; every error carries a JSON-friendly ``witness``."""

    exit_code = 1

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class StructuralError(GroupoidalError):
    """Inputs that do not fit together (ground mismatch, bad table, ...)."""


class GrowthError(GroupoidalError):
    """Closure generation exceeded its element cap."""

    def __init__(self, message: str, partial_size: int):
        super().__init__(message, {"partial_size": partial_size})
        self.partial_size = partial_size


class GradingError(StructuralError):
    """A proposed grading map violates one of its defining conditions."""

    def __init__(self, condition: str, witness=None):
        super().__init__(f"grading condition failed: {condition}", witness)
        self.condition = condition


class PreconditionError(StructuralError):
    """A named mathematical precondition is not met."""


class UndecidedAtWindow(GroupoidalError):
    """A predicate could not be decided inside the configured search box."""

    exit_code = 2


class WindowTooSmall(UndecidedAtWindow):
    """The window cannot see everything the requested computation needs."""


class InputError(GroupoidalError):
    """Malformed user input (job files, JSON payloads)."""

    exit_code = 3
