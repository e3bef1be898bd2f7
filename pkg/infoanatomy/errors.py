"""Exception types raised by infoanatomy.

Input problems derive from ValueError so callers that already catch
ValueError keep working; the CLI maps them to exit code 1.
"""


class InvalidArgumentError(ValueError):
    """An argument violates an operation's precondition."""


class ModelError(ValueError):
    """A machine description is not a valid ergodic unifilar machine."""


class MachineFormatError(ValueError):
    """A machine file could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    """A computation would exceed one of the configured budgets."""


class ConsistencyError(ArithmeticError):
    """A computed quantity broke an identity it must satisfy."""
