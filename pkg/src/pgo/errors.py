from __future__ import annotations


class DomainError(ValueError):
    """A mathematically invalid request (singular matrix, unknown diagram, ...)."""
