"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PreconditionError(ValueError):
    """Arguments violate a stated precondition of the operation."""


class ResourceLimitError(RuntimeError):
    """A size parameter exceeds the configured desk-scale resource cap."""
