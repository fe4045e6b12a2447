"""Exception types shared across the package."""
from __future__ import annotations


class InputError(ValueError):
    """Malformed graph, query, input menu or argument."""


class PreconditionError(ValueError):
    """An operation was applied where its precondition does not hold."""


class PositivityError(ArithmeticError):
    """A ratio divided a nonzero quantity by zero, or a strict 0/0 occurred."""


class ResourceError(RuntimeError):
    """A search would exceed a configured size limit."""
