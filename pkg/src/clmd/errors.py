"""Exception types shared across the package."""


class ClmdError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ClmdError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TreeError(ClmdError):
    """Invalid dependency structure; carries the sentence id when known."""

    def __init__(self, message: str, sent_id: str | None = None):
        self.sent_id = sent_id
        if sent_id is not None:
            message = f"sentence {sent_id}: {message}"
        super().__init__(message)


class PathError(ClmdError):
    """No tree path exists between the requested endpoints."""


class DataError(ClmdError):
    """Inconsistent corpus data (count mismatches, out-of-range ids, ...)."""


class UsageError(ClmdError):
    """Bad command-line invocation."""
