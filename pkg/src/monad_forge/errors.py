"""Exceptions shared across the package."""


class ResourceCapExceeded(Exception):
    """An exhaustive enumeration or a certificate cell exceeded its cap."""
