"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """An edge-list file could not be parsed."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class UndefinedMeasureError(ValueError):
    """A closeness value is undefined for the given arguments (n < 2, S empty, S = V)."""


class CapacityError(MemoryError):
    """A computation would exceed a configured size or memory cap."""

    def __init__(self, message, required=None, cap=None):
        self.required = required
        self.cap = cap
        super().__init__(message)


class DisconnectedGraphError(ValueError):
    """An algorithm that assumes connectivity received a disconnected graph."""
