"""Exception hierarchy shared by every module."""


class PureRankError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PureRankError):
    """Malformed input text. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(PureRankError, ValueError):
    """Well-formed input that violates a precondition."""


class ConvergenceError(PureRankError):
    """An iterative solver hit its iteration cap.

    The last iterate and its L1 step norm are kept so callers can inspect
    how far off the solve was.
    """

    def __init__(self, message, last_iterate=None, residual=None, class_id=None):
        if class_id is not None:
            message = f"class {class_id}: {message}"
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
        self.class_id = class_id


class InsufficientDataError(PureRankError):
    """Not enough samples to form the requested estimate."""
