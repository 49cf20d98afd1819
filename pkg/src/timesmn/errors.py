"""Exception types raised across the package."""

from __future__ import annotations


class TimesMNError(Exception):
    """Base class for all library errors."""


class InvalidDigitError(TimesMNError, ValueError):
    pass


class InvalidMeasureError(TimesMNError, ValueError):
    """A measure description violates one of its invariants."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class UnsupportedExactError(TimesMNError):
    """The requested quantity has no exact evaluator for this measure."""


class PrecisionError(TimesMNError):
    """A starting point carries too few digits for the requested orbit length."""

    def __init__(self, message: str, required_digits: int | None = None):
        super().__init__(message)
        self.required_digits = required_digits


class EmptyMeasureError(TimesMNError):
    pass


class ModeRangeError(TimesMNError, IndexError):
    pass


class OutOfWindowError(TimesMNError):
    pass


class DegenerateWindowError(TimesMNError):
    pass


class SeriesTooShortError(TimesMNError, ValueError):
    pass


class ConfigError(TimesMNError, ValueError):
    """Invalid experiment configuration; ``field`` names the offending key."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field
