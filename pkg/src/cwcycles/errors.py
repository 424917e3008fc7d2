"""Exception hierarchy.

The three leaf categories map onto the CLI exit codes: rejected input (2),
unsupported case (3) and a falsified mathematical check (4).
"""


class CWError(Exception):
    """Base class for every error raised by the package."""


class RejectedInput(CWError, ValueError):
    """The input violates a mathematical precondition (e.g. height < n)."""


class UnsupportedCase(CWError):
    """The input is valid but outside what the library can decide exactly."""


class FalsifiedCheck(CWError):
    """An exact verification that should hold came out false."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class FieldMismatch(CWError, TypeError):
    pass


class ParseError(RejectedInput):
    """Syntax error in a textual polynomial, field or element."""

    def __init__(self, message, text="", column=None):
        self.text = text
        self.column = column
        if column is not None:
            message = f"{message} at column {column}: {text!r}"
        super().__init__(message)
