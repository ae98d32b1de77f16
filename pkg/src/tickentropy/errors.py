"""Exception types shared across the package."""


class TickEntropyError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(TickEntropyError, ValueError):
    """Input data or parameters violate a documented precondition."""


class CsvFormatError(ValidationError):
    """A CSV row could not be parsed.  Carries the 1-based line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DegenerateSeriesError(TickEntropyError, ValueError):
    """An operation is undefined for this series (e.g. constant symbols)."""


class FitError(TickEntropyError, RuntimeError):
    """Model estimation failed.  ``diagnostics`` holds best-so-far state."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DecompositionError(TickEntropyError, ValueError):
    """Whitening decomposition is undefined (no asset with positive gain)."""
