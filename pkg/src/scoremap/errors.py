"""Shared exception types."""


class SpecError(ValueError):
    """A generator spec or map config is structurally invalid."""


class BudgetError(RuntimeError):
    """A computation would exceed its configured size budget."""
