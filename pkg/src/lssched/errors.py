"""Exception hierarchy shared by every module in the package."""


class LsschedError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 1


class DimensionError(LsschedError, ValueError):
    """Operands disagree on qubit count (or a count is invalid)."""

    exit_code = 3


class ValidationError(LsschedError, ValueError):
    exit_code = 3


class UnsupportedAngleError(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InvariantViolation(LsschedError, RuntimeError):
    exit_code = 7


class CapacityError(LsschedError):
    exit_code = 4


class SchedulingError(LsschedError):
    exit_code = 5
