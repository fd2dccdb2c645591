"""Exception hierarchy and user-facing error messages."""


class PMSchemeError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(PMSchemeError, ValueError):
    """A partition, matching, k or t violates an operation's precondition."""


class ResourceLimitError(PMSchemeError):
    """The requested computation is beyond a configured resource guard."""


class ConsistencyError(PMSchemeError):
    """An internal invariant failed (non-equitable partition, complex spectrum...)."""


class ExtractionError(PMSchemeError):
    """A quotient could not be assigned to modules unambiguously."""

    def __init__(self, message: str, source: str = "") -> None:
        super().__init__(message)
        self.source = source


class TableFormatError(PMSchemeError):
    """A persisted character table could not be read back."""


class TableVersionError(TableFormatError):
    pass


class TableParseError(TableFormatError):
    pass


class TableChecksumError(TableFormatError):
    pass


def describe_error(exc: BaseException) -> str:
    """Turn an exception into one line suitable for stderr."""
    msg = str(exc) or exc.__class__.__name__

    if isinstance(exc, InvalidInputError):
        return f"Invalid input: {msg}"
    if isinstance(exc, ResourceLimitError):
        return f"Too large: {msg}. Lower k or switch to --mode implicit."
    if isinstance(exc, TableVersionError):
        return f"Cached table has an unsupported format: {msg}. Delete it and rebuild."
    if isinstance(exc, TableChecksumError):
        return f"Cached table is corrupted: {msg}. Delete it and rebuild."
    if isinstance(exc, TableFormatError):
        return f"Cannot read cached table: {msg}"
    if isinstance(exc, ExtractionError):
        where = f" ({exc.source})" if exc.source else ""
        return f"Eigenvalue extraction is ambiguous{where}: {msg}"
    if isinstance(exc, ConsistencyError):
        return f"Internal consistency check failed: {msg}"
    if isinstance(exc, MemoryError):
        return "Out of memory. Lower k or switch to --mode implicit."
    if isinstance(exc, OSError):
        where = f" {exc.filename}" if exc.filename else ""
        return f"Invalid input: cannot access{where}: {exc.strerror or msg}"
    if isinstance(exc, KeyboardInterrupt):
        return "Interrupted."

    return f"Unexpected error: {msg}"
