"""Exception types shared across the package."""

from __future__ import annotations


class ParameterError(ValueError):
    """An argument lies outside the range an operation accepts."""


class DomainError(ValueError):
    """A special function was evaluated outside its real domain."""


class IntractableError(ParameterError):
    """An exact enumeration would exceed its combinatorial guard."""
