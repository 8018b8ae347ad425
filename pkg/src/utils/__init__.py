"""Utility functions."""

from .retry import with_retry

__all__ = [
    "with_retry",
]
