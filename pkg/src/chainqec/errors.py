"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """An operation refused to run because it would exceed a documented size cap."""
