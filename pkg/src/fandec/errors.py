"""Exception types shared across the package.

Each class carries the exit status the command-line driver maps it to, so
library code never needs to know about process exit conventions.
"""

from __future__ import annotations


class DomainError(ValueError):
    """An input violates a mathematical precondition or structural invariant."""

    exit_status = 1


class ParseError(ValueError):
    """Malformed input text; the message names the offending token/position."""

    exit_status = 2


class BudgetError(RuntimeError):
    """A computation would exceed an explicit resource budget."""

    exit_status = 3

    def __init__(self, message: str, *, budget_name: str, budget: int, needed: int):
        super().__init__(message)
        self.budget_name = budget_name
        self.budget = budget
        self.needed = needed


class InconsistentBundleError(DomainError):
    """An invariant bundle admits no factor multiset over the recognized alphabet."""
