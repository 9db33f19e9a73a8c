"""Exceptions shared across the package."""


class ResourceLimitError(RuntimeError):
    """Raised when a request would exceed a hard cost or memory guard."""
