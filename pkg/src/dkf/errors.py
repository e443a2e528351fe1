"""Exception types shared across the package."""


class DKFError(Exception):
    """Base class for every error raised deliberately by this package."""


class ParseError(DKFError, ValueError):
    """Malformed text input. ``position`` is the 0-based column of the fault."""

    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at column {position + 1}"
            if text:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class PrecisionError(DKFError, ArithmeticError):
    """Truncated series cannot certify the requested result."""


class ResourceLimitError(DKFError, RuntimeError):
    """An enumeration or factorial would exceed its configured cap."""


class InconsistencyError(DKFError, ArithmeticError):
    """A computed identity failed in a way precision cannot explain."""


class IrrationalRepresentativeError(DKFError, ValueError):
    """Required points are not rational over the completion."""
