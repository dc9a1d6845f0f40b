"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """An enumeration or search would exceed its configured resource cap."""
