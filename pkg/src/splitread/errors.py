"""Exception hierarchy shared across the workbench."""


class SplitreadError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SplitreadError):
    """Malformed bracketed input. Carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class FormatError(SplitreadError):
    """A file does not follow its declared column or record layout."""


class ValidationError(SplitreadError):
    """Structurally well-formed input that violates a domain invariant."""


class IntegrityError(SplitreadError):
    """Cross-file referential integrity violation."""


class StandardizationError(SplitreadError):
    """A design-matrix column cannot be turned into z-scores."""


class DegenerateInputWarning(UserWarning):
    """Degenerate input handled by a documented fallback value."""
