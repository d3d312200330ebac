"""Exception hierarchy shared by the library and the command line."""

from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2


class SubshiftError(Exception):
    """Base error carrying a human readable detail and the CLI exit code."""

    exit_code = EXIT_INPUT_ERROR

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class InputError(SubshiftError):
    """Malformed input: shift files, block codes, expressions, arguments."""

    def __init__(
        self, detail: str, line: Optional[int] = None, column: Optional[int] = None, context: Optional[str] = None
    ) -> None:
        super().__init__(detail)
        self.line = line
        self.column = column
        self.context = context

    def __str__(self) -> str:
        if self.line is not None:
            return f"line {self.line}: {self.detail}"
        if self.column is not None:
            return f"column {self.column}: {self.detail}"
        return self.detail


class LevelError(SubshiftError):
    """A snapshot level is too shallow to represent the requested element."""

    def __init__(self, detail: str, suggested: Optional[Any] = None) -> None:
        super().__init__(detail)
        self.suggested = suggested


class AtomLimitError(SubshiftError):
    """A computation would exceed the configured size limits."""


class ShiftMismatchError(SubshiftError):
    """Operands belong to different subshifts."""


class NotIndicatorError(SubshiftError):
    """A set operation received an element whose coefficients are not all 0 or 1."""


class VerificationError(SubshiftError):
    """A block code or conjugacy certificate failed verification."""

    exit_code = EXIT_VERIFICATION_FAILED

    def __init__(self, detail: str, witness: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(detail)
        self.witness = witness or {}
